//! Orbit enumeration: congruence classes of matrices and equivalence classes
//! of matrix subspaces.

mod space;
mod strategy;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FiniteField};
use crate::matspace::{subspace_key, Mat, MatTuple, SubspaceKey};

pub use space::{ActionSpace, Key, MatrixSpace, ObjectFlags, SubspaceSpace};
pub use strategy::{strategies, strategy, Auto, FullSweep, GeneratorBfs, OrbitStrategy, SWEEP_THRESHOLD};

/// Default cap on estimated group actions.
pub const DEFAULT_BUDGET: u128 = 10_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifyOptions {
    /// Include field automorphisms in the acting group (subspaces only).
    pub use_frobenius: bool,
    /// Drop classes with no compatible member.
    pub filter_compatible: bool,
    /// Restrict the ground set to symmetric matrices (congruence only).
    pub symmetric_only: bool,
    pub strategy: String,
    #[serde(skip)]
    pub workers: usize,
    #[serde(skip)]
    pub budget: u128,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            use_frobenius: true,
            filter_compatible: false,
            symmetric_only: false,
            strategy: "auto".into(),
            workers: 1,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassParams {
    pub p: u32,
    pub r: u32,
    pub q: u32,
    pub s: usize,
    /// Subspace dimension; absent for congruence classification.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    pub options: ClassifyOptions,
}

/// One orbit. `canonical_rep` is the least key in the orbit, decoded as a
/// list of basis matrices (one matrix for congruence classes).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassEntry {
    pub canonical_rep: Vec<Mat>,
    pub key: Key,
    pub orbit_size: u64,
    pub contains_compatible: bool,
    pub commutative_capable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub params: ClassParams,
    /// The strategy actually run (`auto` resolved).
    pub strategy: String,
    pub class_count: usize,
    pub commutative_capable_count: usize,
    pub compatible_count: usize,
    /// Objects covered by the reported classes.
    pub total_objects: u64,
    pub ground_set_size: u64,
    pub classes: Vec<ClassEntry>,
}

struct Bitset(Vec<AtomicU64>);

impl Bitset {
    fn new(n: usize) -> Self {
        Self((0..n.div_ceil(64)).map(|_| AtomicU64::new(0)).collect())
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64].load(Ordering::Relaxed) & (1 << (i % 64)) != 0
    }

    fn set(&self, i: usize) {
        self.0[i / 64].fetch_or(1 << (i % 64), Ordering::Relaxed);
    }
}

fn decode(s: usize, key: &[u32]) -> Vec<Mat> {
    key.chunks(s * s).map(|c| Mat::from_entries(s, c.iter().map(|&x| FieldElement::new(x)).collect())).collect()
}

fn class_entry(space: &dyn ActionSpace, members: &[Key]) -> Result<ClassEntry> {
    let first = space.flags(&members[0]);
    let mut compatible = first.compatible;
    for m in &members[1..] {
        let f = space.flags(m);
        if f.symmetric != first.symmetric {
            return Err(Error::OrbitInvariant(format!("symmetry differs within the orbit of {:?}", members[0])));
        }
        compatible |= f.compatible;
    }
    Ok(ClassEntry {
        canonical_rep: decode(space.s(), &members[0]),
        key: members[0].clone(),
        orbit_size: members.len() as u64,
        contains_compatible: compatible,
        commutative_capable: first.symmetric,
    })
}

/// Partitions the ground set of `space` into orbits.
///
/// Starts are split into contiguous ranges, one per worker. A shared visited
/// set only saves repeated work: each orbit is keyed by its least member, so
/// the result does not depend on scheduling or the number of workers.
pub fn partition(space: &dyn ActionSpace, opts: &ClassifyOptions) -> Result<(String, u64, Vec<ClassEntry>)> {
    let ground = space.ground_set()?;
    let n = ground.len();
    let chosen = strategy(&opts.strategy)?;
    let chosen = if chosen.name() == "auto" { strategy(Auto::resolve(space, n as u128))? } else { chosen };
    let estimated = chosen.estimated_actions(space, n as u128);
    if estimated > opts.budget {
        return Err(Error::BudgetExceeded { estimated, budget: opts.budget });
    }
    let visited = Bitset::new(n);
    let index = |k: &Key| ground.binary_search(k).map_err(|_| Error::OrbitInvariant(format!("{k:?} left the ground set")));
    let workers = opts.workers.clamp(1, n.max(1));
    let chunk = n.div_ceil(workers).max(1);

    let run = |lo: usize, hi: usize| -> Result<BTreeMap<Key, ClassEntry>> {
        let mut found = BTreeMap::new();
        for i in lo..hi {
            if visited.get(i) {
                continue;
            }
            let members = chosen.orbit(space, &ground[i]);
            for m in &members {
                visited.set(index(m)?);
            }
            let entry = class_entry(space, &members)?;
            found.insert(entry.key.clone(), entry);
        }
        Ok(found)
    };

    let results: Vec<Result<BTreeMap<Key, ClassEntry>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let (lo, hi) = ((w * chunk).min(n), ((w + 1) * chunk).min(n));
                let run = &run;
                scope.spawn(move || run(lo, hi))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut merged = BTreeMap::new();
    for r in results {
        merged.extend(r?);
    }
    Ok((chosen.name().to_string(), n as u64, merged.into_values().collect()))
}

fn report(space: &dyn ActionSpace, params: ClassParams, opts: &ClassifyOptions) -> Result<ClassReport> {
    let (strategy, ground_set_size, mut classes) = partition(space, opts)?;
    if opts.filter_compatible {
        classes.retain(|c| c.contains_compatible);
    }
    Ok(ClassReport {
        params,
        strategy,
        class_count: classes.len(),
        commutative_capable_count: classes.iter().filter(|c| c.commutative_capable).count(),
        compatible_count: classes.iter().filter(|c| c.contains_compatible).count(),
        total_objects: classes.iter().map(|c| c.orbit_size).sum(),
        ground_set_size,
        classes,
    })
}

fn params(field: &FiniteField, s: usize, t: Option<usize>, opts: &ClassifyOptions) -> ClassParams {
    ClassParams { p: field.p(), r: field.r(), q: field.q(), s, t, options: opts.clone() }
}

/// Equivalence classes of `t`-dimensional subspaces of `M_s(F)`.
pub fn classify_subspaces(field: &FiniteField, s: usize, t: usize, opts: &ClassifyOptions) -> Result<ClassReport> {
    let space = SubspaceSpace::new(field, s, t, opts.use_frobenius)?;
    report(&space, params(field, s, Some(t), opts), opts)
}

/// Congruence classes of `s x s` matrices, zero matrix included. Field
/// automorphisms never act here.
pub fn classify_congruence(field: &FiniteField, s: usize, opts: &ClassifyOptions) -> Result<ClassReport> {
    let space = MatrixSpace::new(field, s, opts.symmetric_only)?;
    let mut opts = opts.clone();
    opts.use_frobenius = false;
    report(&space, params(field, s, None, &opts), &opts)
}

/// Object whose orbit is requested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitStart {
    /// Congruence orbit of a matrix.
    Matrix(Mat),
    /// Equivalence orbit of the span of a tuple.
    Span(MatTuple),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub canonical_rep: Vec<Mat>,
    pub orbit_size: u64,
    pub members: Vec<Key>,
}

/// The orbit of one object, by generator closure.
pub fn orbit_of(field: &FiniteField, start: &OrbitStart, opts: &ClassifyOptions) -> Result<OrbitReport> {
    let (space, key): (Box<dyn ActionSpace>, Key) = match start {
        OrbitStart::Matrix(m) => {
            m.check_field(field)?;
            (Box::new(MatrixSpace::new(field, m.size(), false)?), m.entries().iter().map(|e| e.code()).collect())
        }
        OrbitStart::Span(tuple) => {
            for m in tuple.mats() {
                m.check_field(field)?;
            }
            let SubspaceKey { rank, rref, .. } = subspace_key(field, tuple);
            if rank == 0 {
                return Err(Error::RangeError("the zero subspace has no equivalence class".into()));
            }
            (Box::new(SubspaceSpace::new(field, tuple.size(), rank, opts.use_frobenius)?), rref)
        }
    };
    let bound = GeneratorBfs.estimated_actions(space.as_ref(), space.group_order());
    if bound > opts.budget {
        return Err(Error::BudgetExceeded { estimated: bound, budget: opts.budget });
    }
    let members = GeneratorBfs.orbit(space.as_ref(), &key);
    Ok(OrbitReport { canonical_rep: decode(space.s(), &members[0]), orbit_size: members.len() as u64, members })
}
