//! Bundled diagrams and synthetic families.
//!
//! The Gluck-twist matrix `T(n)` and the matrices of its reduction are
//! stored as matrix files under `data/`, each pinned by a SHA-256 checksum.
//! Setting `TRIHOMO_DATA` points [`DataStore::from_env`] at another directory.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::diagram::{Family, TrisectionMatrix};
use crate::exactalg::{HClass, IntPoly, SymplecticSpace};
use crate::format::{parse_matrix, FormatError};
use crate::moves::{apply, Move};

pub const DATA_ENV: &str = "TRIHOMO_DATA";

const EMBEDDED: &[(&str, &str)] = &[
    ("gluck_T.json", include_str!("../data/gluck_T.json")),
    ("theorem2_step1.json", include_str!("../data/theorem2_step1.json")),
    ("theorem2_step2.json", include_str!("../data/theorem2_step2.json")),
    ("theorem2_step3.json", include_str!("../data/theorem2_step3.json")),
    ("theorem2_step4.json", include_str!("../data/theorem2_step4.json")),
    ("theorem2_step5.json", include_str!("../data/theorem2_step5.json")),
    ("theorem2_step6.json", include_str!("../data/theorem2_step6.json")),
    ("theorem2_final.json", include_str!("../data/theorem2_final.json")),
    ("theorem2.cert", include_str!("../data/theorem2.cert")),
];

const EMBEDDED_SUMS: &str = include_str!("../data/SHA256SUMS");

/// Name of the bundled reduction certificate inside the data store.
pub const THEOREM2_CERT: &str = "theorem2.cert";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("unknown corpus id {0:?}")]
    UnknownId(String),
    #[error("step {0} out of range 1..=7")]
    Step(u8),
    #[error("class counts {counts:?} do not sum to genus {genus}")]
    Counts { genus: usize, counts: [usize; 3] },
    #[error("data file {0:?} not found")]
    Missing(String),
    #[error("checksum mismatch for {name}: expected {expected}, found {found}")]
    Checksum { name: String, expected: String, found: String },
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{name}: {source}")]
    Format { name: String, source: FormatError },
}

/// Where corpus files come from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum DataStore {
    #[default]
    Embedded,
    Directory(PathBuf),
}

impl DataStore {
    pub fn from_env() -> DataStore {
        match std::env::var_os(DATA_ENV) {
            Some(dir) if !dir.is_empty() => DataStore::Directory(dir.into()),
            _ => DataStore::Embedded,
        }
    }

    /// File contents, verified against the store's `SHA256SUMS` when it lists the file.
    pub fn read(&self, name: &str) -> Result<String, CorpusError> {
        let (text, sums) = match self {
            DataStore::Embedded => {
                let text = EMBEDDED
                    .iter()
                    .find(|(n, _)| *n == name)
                    .map(|(_, t)| t.to_string())
                    .ok_or_else(|| CorpusError::Missing(name.to_string()))?;
                (text, Some(EMBEDDED_SUMS.to_string()))
            }
            DataStore::Directory(dir) => {
                let path = dir.join(name);
                if !path.exists() {
                    return Err(CorpusError::Missing(path.display().to_string()));
                }
                let text = std::fs::read_to_string(&path)
                    .map_err(|source| CorpusError::Io { path: path.display().to_string(), source })?;
                (text, std::fs::read_to_string(dir.join("SHA256SUMS")).ok())
            }
        };
        if let Some(expected) = sums.as_deref().and_then(|s| lookup_sum(s, name)) {
            let found = sha256_hex(&text);
            if found != expected {
                return Err(CorpusError::Checksum { name: name.to_string(), expected, found });
            }
        }
        Ok(text)
    }

    pub fn matrix(&self, name: &str) -> Result<TrisectionMatrix, CorpusError> {
        let text = self.read(name)?;
        parse_matrix(&text).map_err(|source| CorpusError::Format { name: name.to_string(), source })
    }
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn lookup_sum(sums: &str, name: &str) -> Option<String> {
    sums.lines().find_map(|line| {
        let (hash, file) = line.split_once("  ")?;
        (file.trim() == name).then(|| hash.trim().to_string())
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CorpusId {
    /// `T(n)` for the Gluck twist on the spun `(2n+1, 2)`-torus knot.
    GluckSpunTorusT,
    /// The matrix displayed after reduction step `s ∈ 1..=7`.
    Theorem2Intermediate(u8),
    /// The last matrix of the reduction; same as step 7.
    Theorem2Final,
    /// Stabilized genus-0 diagram with `counts[c]` indices of each class.
    StandardSphere { genus: usize, counts: [usize; 3] },
}

impl CorpusId {
    pub fn file_name(&self) -> Option<String> {
        match self {
            CorpusId::GluckSpunTorusT => Some("gluck_T.json".into()),
            CorpusId::Theorem2Intermediate(7) | CorpusId::Theorem2Final => {
                Some("theorem2_final.json".into())
            }
            CorpusId::Theorem2Intermediate(s) => Some(format!("theorem2_step{s}.json")),
            CorpusId::StandardSphere { .. } => None,
        }
    }
}

impl fmt::Display for CorpusId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusId::GluckSpunTorusT => write!(f, "gluck-T"),
            CorpusId::Theorem2Intermediate(s) => write!(f, "theorem2-step:{s}"),
            CorpusId::Theorem2Final => write!(f, "theorem2-final"),
            CorpusId::StandardSphere { genus, counts: [a, b, c] } => {
                write!(f, "standard-sphere:{genus}:{a},{b},{c}")
            }
        }
    }
}

impl FromStr for CorpusId {
    type Err = CorpusError;

    /// `gluck-T`, `theorem2-step:S`, `theorem2-final`, `standard-sphere:G:A,B,C`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || CorpusError::UnknownId(s.to_string());
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        let id = match head {
            "gluck-T" | "gluck_spun_torus_T" => CorpusId::GluckSpunTorusT,
            "theorem2-final" | "theorem2_final" => CorpusId::Theorem2Final,
            "theorem2-step" | "theorem2_intermediate" => {
                let step = parts.next().and_then(|x| x.parse().ok()).ok_or_else(unknown)?;
                CorpusId::Theorem2Intermediate(step)
            }
            "standard-sphere" | "standard_sphere" => {
                let genus = parts.next().and_then(|x| x.parse().ok()).ok_or_else(unknown)?;
                let counts = parts.next().map(parse_counts).ok_or_else(unknown)?.ok_or_else(unknown)?;
                CorpusId::StandardSphere { genus, counts }
            }
            _ => return Err(unknown()),
        };
        if parts.next().is_some() {
            return Err(unknown());
        }
        Ok(id)
    }
}

/// `"a,b,c"` → `[a, b, c]`
pub fn parse_counts(s: &str) -> Option<[usize; 3]> {
    let v: Vec<usize> = s.split(',').map(|x| x.trim().parse().ok()).collect::<Option<_>>()?;
    v.try_into().ok()
}

/// The exact matrix for `id`, from the embedded data.
pub fn build(id: &CorpusId) -> Result<TrisectionMatrix, CorpusError> {
    build_from(&DataStore::Embedded, id)
}

pub fn build_from(store: &DataStore, id: &CorpusId) -> Result<TrisectionMatrix, CorpusError> {
    match id {
        CorpusId::Theorem2Intermediate(s) if !(1..=7).contains(s) => Err(CorpusError::Step(*s)),
        CorpusId::StandardSphere { genus, counts } => standard_sphere(*genus, *counts),
        _ => store.matrix(&id.file_name().expect("file-backed id")),
    }
}

/// Index `i` of class A gets `α_i = e_{g+i}`, `β_i = γ_i = e_i`; B and C
/// rotate the roles. Indices are laid out A first, then B, then C.
pub fn standard_sphere(genus: usize, counts: [usize; 3]) -> Result<TrisectionMatrix, CorpusError> {
    if counts.iter().sum::<usize>() != genus {
        return Err(CorpusError::Counts { genus, counts });
    }
    let space = SymplecticSpace::new(genus);
    let mut fams: [Vec<HClass>; 3] = Default::default();
    let mut i = 0;
    for (class, &count) in counts.iter().enumerate() {
        for _ in 0..count {
            i += 1;
            let dist = Family::from_index(class);
            for f in Family::ALL {
                let v = if f == dist { space.basis(genus + i) } else { space.basis(i) };
                fams[f.index()].push(v);
            }
        }
    }
    let [a, b, c] = fams;
    Ok(TrisectionMatrix::new(space, a, b, c)
        .expect("well-shaped")
        .with_label(format!("standard sphere g={genus} classes {counts:?}")))
}

/// Applies `depth` random slides and twists (with the occasional negate or
/// permute) with coefficients in `±1..=±2`. Deterministic per seed.
pub fn scramble(d: &TrisectionMatrix, seed: u64, depth: usize) -> (TrisectionMatrix, Vec<Move>) {
    scramble_with_bound(d, seed, depth, 2)
}

pub fn scramble_with_bound(
    d: &TrisectionMatrix,
    seed: u64,
    depth: usize,
    coefficient_bound: i64,
) -> (TrisectionMatrix, Vec<Move>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = d.genus();
    let bound = coefficient_bound.max(1);
    let mut cur = d.clone();
    let mut moves = Vec::with_capacity(depth);
    if g == 0 {
        return (cur, moves);
    }
    let coeff = |rng: &mut ChaCha8Rng| {
        let c = rng.random_range(1..=bound);
        if rng.random_bool(0.5) { -c } else { c }
    };
    while moves.len() < depth {
        let family = Family::from_index(rng.random_range(0..3));
        let roll: f64 = rng.random();
        let mv = if roll < 0.45 && g >= 2 {
            let target = rng.random_range(1..=g);
            let mut source = rng.random_range(1..g);
            if source >= target {
                source += 1;
            }
            Move::Slide { family, target, source, m: IntPoly::constant(coeff(&mut rng)) }
        } else if roll < 0.92 {
            let v = d.space().basis(rng.random_range(1..=2 * g));
            Move::Twist { v, k: IntPoly::constant(coeff(&mut rng)) }
        } else if roll < 0.96 {
            Move::Negate { family, index: rng.random_range(1..=g) }
        } else {
            let mut perm: Vec<usize> = (1..=g).collect();
            for i in (1..g).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            Move::Permute { family, perm }
        };
        let next = apply(&cur, &mv).expect("generated moves are well-formed");
        if next == cur {
            continue;
        }
        cur = next;
        moves.push(mv);
    }
    (cur, moves)
}
