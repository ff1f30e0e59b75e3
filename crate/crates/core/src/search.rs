//! Bounded search for standardization certificates.
//!
//! Iterative deepening on the depth limit; inside each iteration a
//! best-first expansion ordered by standardness defect, ties broken by the
//! canonical key. States are deduplicated by canonical key, which ignores
//! row signs, row order inside a family and cyclic relabeling of families.
//! Every certificate found is replayed with exact arithmetic before it is
//! returned.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::str::FromStr;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::certificate::{replay, Certificate, ReplayOptions};
use crate::diagram::{Family, TrisectionMatrix};
use crate::exactalg::{HClass, IntPoly};
use crate::moves::Move;
use crate::standardness::Profile;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search needs integer entries; evaluate the matrix first")]
    Symbolic,
    #[error("entry {0} does not fit in 64 bits")]
    TooLarge(String),
    #[error("budget field {0} must be positive")]
    Budget(&'static str),
    #[error("internal error: certificate failed verification: {0}")]
    Unsound(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwistVocabulary {
    /// `e_1, …, e_2g`
    BasisVectors,
    /// Rows of the current matrix.
    FamilyRows,
    /// Rows plus differences of rows from different families.
    RowDifferences,
}

impl FromStr for TwistVocabulary {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basis" | "basis-vectors" => Ok(TwistVocabulary::BasisVectors),
            "rows" | "family-rows" => Ok(TwistVocabulary::FamilyRows),
            "diffs" | "row-differences" => Ok(TwistVocabulary::RowDifferences),
            _ => Err(format!("unknown twist vocabulary {s:?} (basis, rows, diffs)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_depth: usize,
    pub max_states: usize,
    /// Keep only the best `k` children of each expanded state.
    pub beam_width: Option<usize>,
    /// Slide multiplicities and twist exponents range over `±1..=±bound`.
    pub coefficient_bound: i64,
    pub twist_vocabulary: TwistVocabulary,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_depth: 6,
            max_states: 200_000,
            beam_width: None,
            coefficient_bound: 2,
            twist_vocabulary: TwistVocabulary::BasisVectors,
        }
    }
}

impl SearchBudget {
    fn check(&self) -> Result<(), SearchError> {
        if self.max_depth == 0 {
            return Err(SearchError::Budget("max_depth"));
        }
        if self.max_states == 0 {
            return Err(SearchError::Budget("max_states"));
        }
        if self.beam_width == Some(0) {
            return Err(SearchError::Budget("beam_width"));
        }
        if self.coefficient_bound <= 0 {
            return Err(SearchError::Budget("coefficient_bound"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SearchStats {
    pub states_expanded: usize,
    pub states_generated: usize,
    pub depth_reached: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// `None` means "not found within budget", nothing stronger.
    pub certificate: Option<Certificate>,
    pub stats: SearchStats,
}

/// Key shared by matrices that differ only by Negate/Permute moves or a
/// cyclic relabeling of the families.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<HClass>);

pub fn canonicalize(d: &TrisectionMatrix) -> CanonicalKey {
    let blocks: Vec<Vec<HClass>> = Family::ALL
        .iter()
        .map(|&f| {
            let mut rows: Vec<HClass> = d.family(f).iter().map(|r| r.sign_canonical().0).collect();
            rows.sort();
            rows
        })
        .collect();
    let best = (0..3)
        .map(|s| (0..3).flat_map(|k| blocks[(s + k) % 3].iter().cloned()).collect::<Vec<_>>())
        .min()
        .unwrap();
    CanonicalKey(best)
}

/// Flat `3g × 2g` integer rows, α then β then γ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State {
    rows: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum CompactMove {
    Slide { family: usize, target: usize, source: usize, m: i64 },
    Twist { v: usize, k: i64 },
}

struct Ctx {
    g: usize,
    budget: SearchBudget,
}

impl Ctx {
    fn dim(&self) -> usize {
        2 * self.g
    }

    fn row<'a>(&self, s: &'a State, r: usize) -> &'a [i64] {
        &s.rows[r * self.dim()..(r + 1) * self.dim()]
    }

    fn omega(&self, x: &[i64], y: &[i64]) -> Option<i64> {
        let g = self.g;
        let mut acc: i64 = 0;
        for i in 0..g {
            acc = acc.checked_add(x[g + i].checked_mul(y[i])?)?;
            acc = acc.checked_sub(x[i].checked_mul(y[g + i])?)?;
        }
        Some(acc)
    }

    fn key(&self, s: &State) -> Vec<i64> {
        let dim = self.dim();
        let g = self.g;
        let mut blocks: Vec<Vec<Vec<i64>>> = Vec::with_capacity(3);
        for f in 0..3 {
            let mut rows: Vec<Vec<i64>> = (0..g)
                .map(|i| {
                    let r = self.row(s, f * g + i);
                    let neg = r.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
                    r.iter().map(|&x| if neg { -x } else { x }).collect()
                })
                .collect();
            rows.sort();
            blocks.push(rows);
        }
        (0..3)
            .map(|s| {
                let mut out = Vec::with_capacity(3 * g * dim);
                for k in 0..3 {
                    for r in &blocks[(s + k) % 3] {
                        out.extend_from_slice(r);
                    }
                }
                out
            })
            .min()
            .unwrap()
    }

    fn vocabulary(&self, s: &State) -> Vec<Vec<i64>> {
        let dim = self.dim();
        let mut out: Vec<Vec<i64>> = Vec::new();
        let mut push = |v: Vec<i64>| {
            if v.iter().all(|&x| x == 0) {
                return;
            }
            let neg = v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0);
            let v: Vec<i64> = if neg { v.iter().map(|x| -x).collect() } else { v };
            if !out.contains(&v) {
                out.push(v);
            }
        };
        match self.budget.twist_vocabulary {
            TwistVocabulary::BasisVectors => {
                for k in 0..dim {
                    let mut v = vec![0; dim];
                    v[k] = 1;
                    push(v);
                }
            }
            TwistVocabulary::FamilyRows | TwistVocabulary::RowDifferences => {
                let n = 3 * self.g;
                for r in 0..n {
                    push(self.row(s, r).to_vec());
                }
                if self.budget.twist_vocabulary == TwistVocabulary::RowDifferences {
                    for a in 0..n {
                        for b in (a + 1)..n {
                            if a / self.g == b / self.g {
                                continue;
                            }
                            let d: Option<Vec<i64>> = self
                                .row(s, a)
                                .iter()
                                .zip(self.row(s, b))
                                .map(|(x, y)| x.checked_sub(*y))
                                .collect();
                            if let Some(d) = d {
                                push(d);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn moves(&self, s: &State, vocab: &[Vec<i64>]) -> Vec<CompactMove> {
        let g = self.g;
        let b = self.budget.coefficient_bound;
        let coeffs: Vec<i64> = (1..=b).flat_map(|c| [c, -c]).collect();
        let mut out = Vec::new();
        for family in 0..3 {
            for target in 0..g {
                for source in 0..g {
                    if source == target || self.row(s, family * g + source).iter().all(|&x| x == 0) {
                        continue;
                    }
                    for &m in &coeffs {
                        out.push(CompactMove::Slide { family, target, source, m });
                    }
                }
            }
        }
        for (vi, v) in vocab.iter().enumerate() {
            let acts = (0..3 * g).any(|r| self.omega(self.row(s, r), v) != Some(0));
            if !acts {
                continue;
            }
            for &k in &coeffs {
                out.push(CompactMove::Twist { v: vi, k });
            }
        }
        out
    }

    fn apply(&self, s: &State, mv: &CompactMove, vocab: &[Vec<i64>]) -> Option<State> {
        let dim = self.dim();
        let mut rows = s.rows.clone();
        match *mv {
            CompactMove::Slide { family, target, source, m } => {
                let (t, src) = ((family * self.g + target) * dim, (family * self.g + source) * dim);
                for c in 0..dim {
                    rows[t + c] = rows[t + c].checked_add(m.checked_mul(s.rows[src + c])?)?;
                }
            }
            CompactMove::Twist { v, k } => {
                let v = &vocab[v];
                for r in 0..3 * self.g {
                    let c = self.omega(self.row(s, r), v)?.checked_mul(k)?;
                    if c == 0 {
                        continue;
                    }
                    for j in 0..dim {
                        rows[r * dim + j] = rows[r * dim + j].checked_add(c.checked_mul(v[j])?)?;
                    }
                }
            }
        }
        Some(State { rows })
    }

    fn to_move(&self, mv: &CompactMove, vocab: &[Vec<i64>]) -> Move {
        match *mv {
            CompactMove::Slide { family, target, source, m } => Move::Slide {
                family: Family::from_index(family),
                target: target + 1,
                source: source + 1,
                m: IntPoly::constant(m),
            },
            CompactMove::Twist { v, k } => Move::Twist {
                v: HClass::from_i64s(&vocab[v]),
                k: IntPoly::constant(k),
            },
        }
    }
}

struct Node {
    state: State,
    parent: Option<usize>,
    mv: Option<Move>,
    depth: usize,
}

struct Child {
    state: State,
    key: Vec<i64>,
    defect: u64,
    mv: Move,
}

fn to_state(d: &TrisectionMatrix) -> Result<State, SearchError> {
    if d.is_symbolic() {
        return Err(SearchError::Symbolic);
    }
    let mut rows = Vec::with_capacity(3 * d.genus() * 2 * d.genus());
    for r in d.rows() {
        for x in r.entries() {
            let c = x.as_constant().expect("constant");
            rows.push(c.to_i64().ok_or_else(|| SearchError::TooLarge(c.to_string()))?);
        }
    }
    Ok(State { rows })
}

/// Looks for moves that bring `d` into standard position within `budget`.
pub fn find_certificate(d: &TrisectionMatrix, budget: &SearchBudget) -> Result<SearchOutcome, SearchError> {
    budget.check()?;
    let root = to_state(d)?;
    let ctx = Ctx { g: d.genus(), budget: *budget };
    let mut stats = SearchStats::default();

    if Profile::from_int_rows(ctx.g, &root.rows).defect() == 0 {
        return Ok(SearchOutcome { certificate: Some(Certificate::from_moves(ctx.g, vec![])), stats });
    }

    for limit in 1..=budget.max_depth {
        stats.depth_reached = limit;
        let mut arena = vec![Node { state: root.clone(), parent: None, mv: None, depth: 0 }];
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        seen.insert(ctx.key(&root), 0);
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((u64::MAX, Vec::new(), 0usize)));

        while let Some(Reverse((_, _, id))) = heap.pop() {
            if stats.states_expanded >= budget.max_states {
                return Ok(SearchOutcome { certificate: None, stats });
            }
            stats.states_expanded += 1;
            let depth = arena[id].depth;
            let state = arena[id].state.clone();
            let vocab = ctx.vocabulary(&state);
            let moves = ctx.moves(&state, &vocab);
            let mut children: Vec<Child> = moves
                .par_iter()
                .filter_map(|mv| {
                    let next = ctx.apply(&state, mv, &vocab)?;
                    if next == state {
                        return None;
                    }
                    let defect = Profile::from_int_rows(ctx.g, &next.rows).defect();
                    Some(Child { key: ctx.key(&next), state: next, defect, mv: ctx.to_move(mv, &vocab) })
                })
                .collect();
            stats.states_generated += children.len();
            if let Some(w) = budget.beam_width {
                children.sort_by(|a, b| (a.defect, &a.key).cmp(&(b.defect, &b.key)));
                children.truncate(w);
            }
            for child in children {
                if child.defect == 0 {
                    let mut path = vec![child.mv];
                    let mut at = Some(id);
                    while let Some(i) = at {
                        path.extend(arena[i].mv.clone());
                        at = arena[i].parent;
                    }
                    path.reverse();
                    let cert = Certificate::from_moves(ctx.g, path);
                    verify(d, &cert)?;
                    return Ok(SearchOutcome { certificate: Some(cert), stats });
                }
                let cd = depth + 1;
                if cd >= limit || seen.get(&child.key).is_some_and(|&prev| prev <= cd) {
                    continue;
                }
                seen.insert(child.key.clone(), cd);
                let cid = arena.len();
                arena.push(Node { state: child.state, parent: Some(id), mv: Some(child.mv), depth: cd });
                heap.push(Reverse((child.defect, child.key, cid)));
            }
        }
    }
    Ok(SearchOutcome { certificate: None, stats })
}

/// Exact replay of a found certificate; it must end in standard position.
fn verify(d: &TrisectionMatrix, cert: &Certificate) -> Result<(), SearchError> {
    let r = replay(d, cert, ReplayOptions::default(), &|name| Err(format!("no file {name}")))
        .map_err(|e| SearchError::Unsound(e.to_string()))?;
    if r.standard.is_none() {
        return Err(SearchError::Unsound("final matrix is not in standard position".into()));
    }
    Ok(())
}
