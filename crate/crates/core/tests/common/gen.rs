//! proptest strategies shared by the property suites.

use proptest::prelude::*;
use trihomo::certificate::{Certificate, Expectation, Step};
use trihomo::corpus::standard_sphere;
use trihomo::diagram::{Family, TrisectionMatrix};
use trihomo::exactalg::{HClass, IntPoly, SymplecticSpace};
use trihomo::moves::{apply, Move};

pub fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Alpha), Just(Family::Beta), Just(Family::Gamma)]
}

/// Degree ≤ 2, small coefficients, mostly constant or linear.
pub fn poly() -> impl Strategy<Value = IntPoly> {
    prop_oneof![
        3 => (-6i64..=6).prop_map(IntPoly::constant),
        3 => ((-6i64..=6), (-4i64..=4)).prop_map(|(a, b)| IntPoly::linear(a, b)),
        1 => prop::collection::vec(-3i64..=3, 3).prop_map(|c| IntPoly::from_i64s(&c)),
    ]
}

pub fn nonzero_poly() -> impl Strategy<Value = IntPoly> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

pub fn int_class(dim: usize) -> impl Strategy<Value = HClass> {
    prop::collection::vec(-4i64..=4, dim).prop_map(|v| HClass::from_i64s(&v))
}

pub fn poly_class(dim: usize) -> impl Strategy<Value = HClass> {
    prop::collection::vec(poly(), dim).prop_map(HClass)
}

pub fn twist_vector(dim: usize) -> impl Strategy<Value = HClass> {
    int_class(dim).prop_filter("nonzero", |v| !v.is_zero())
}

/// Any well-formed move for genus `g ≥ 1`.
pub fn any_move(g: usize) -> BoxedStrategy<Move> {
    let twist = (twist_vector(2 * g), poly()).prop_map(|(v, k)| Move::Twist { v, k });
    let negate = (family(), 1..=g).prop_map(|(family, index)| Move::Negate { family, index });
    let permute = (family(), Just((1..=g).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|(family, perm)| Move::Permute { family, perm });
    if g < 2 {
        return prop_oneof![twist, negate, permute].boxed();
    }
    let slide = (family(), 1..=g, 1..g, poly()).prop_map(move |(family, target, s, m)| {
        let source = if s >= target { s + 1 } else { s };
        Move::Slide { family, target, source, m }
    });
    prop_oneof![3 => slide, 3 => twist, 1 => negate, 1 => permute].boxed()
}

/// Unconstrained rows: not isotropic in general.
pub fn raw_matrix() -> impl Strategy<Value = TrisectionMatrix> {
    (1usize..=4).prop_flat_map(|g| {
        let fam = move || prop::collection::vec(poly_class(2 * g), g);
        (fam(), fam(), fam()).prop_map(move |(a, b, c)| {
            TrisectionMatrix::new(SymplecticSpace::new(g), a, b, c).expect("well-shaped")
        })
    })
}

/// A standard sphere moved by a few random (possibly symbolic) moves:
/// every family stays isotropic of full rank.
pub fn moved_sphere() -> impl Strategy<Value = TrisectionMatrix> {
    (1usize..=4)
        .prop_flat_map(|g| {
            let counts = (0..=g).prop_flat_map(move |a| (Just(a), 0..=g - a)).prop_map(move |(a, b)| [a, b, g - a - b]);
            (Just(g), counts, prop::collection::vec(any_move(g), 0..5))
        })
        .prop_map(|(g, counts, moves)| {
            let mut d = standard_sphere(g, counts).expect("counts sum to g");
            for mv in &moves {
                d = apply(&d, mv).expect("generated moves are well-formed");
            }
            d
        })
}

pub fn matrix_and_move() -> impl Strategy<Value = (TrisectionMatrix, Move)> {
    prop_oneof![raw_matrix(), moved_sphere()].prop_flat_map(|d| {
        let g = d.genus();
        (Just(d), any_move(g))
    })
}

fn expectation(g: usize) -> impl Strategy<Value = Option<Expectation>> {
    let file = "[a-z][a-z0-9_]{0,10}\\.json".prop_map(Expectation::File);
    let inline = (
        prop::collection::vec(poly_class(2 * g), g),
        prop::collection::vec(poly_class(2 * g), g),
        prop::collection::vec(poly_class(2 * g), g),
    )
        .prop_map(move |(a, b, c)| {
            Expectation::Inline(TrisectionMatrix::new(SymplecticSpace::new(g), a, b, c).expect("well-shaped"))
        });
    prop_oneof![4 => Just(None), 1 => file.prop_map(Some), 1 => inline.prop_map(Some)]
}

pub fn certificate() -> impl Strategy<Value = Certificate> {
    (1usize..=4).prop_flat_map(|g| {
        (
            prop::collection::vec((any_move(g), expectation(g)), 0..8),
            expectation(g),
            prop::option::of("[a-z][a-z0-9_-]{0,12}"),
        )
            .prop_map(move |(steps, footer, source)| {
                let steps: Vec<Step> = steps.into_iter().map(|(mv, expect)| Step { mv, expect }).collect();
                let variable = steps.iter().any(|s| s.mv.is_symbolic()).then(|| "n".to_string());
                Certificate { genus: g, variable, source, steps, footer }
            })
    })
}
