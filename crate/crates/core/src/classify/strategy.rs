use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use crate::error::{Error, Result};

use super::space::{ActionSpace, Key};

/// Group actions up to this many elementary steps use the full sweep under `auto`.
pub const SWEEP_THRESHOLD: u128 = 1_000_000_000;

/// A way of computing the orbit of one object.
pub trait OrbitStrategy: Send + Sync {
    fn name(&self) -> &'static str;
    /// Upper bound on group actions needed to partition `objects` objects.
    fn estimated_actions(&self, space: &dyn ActionSpace, objects: u128) -> u128;
    /// Orbit members in ascending order.
    fn orbit(&self, space: &dyn ActionSpace, start: &[u32]) -> Vec<Key>;
}

/// Applies every group element to the start object.
pub struct FullSweep;

/// Closes the start object under the group generators.
pub struct GeneratorBfs;

/// Full sweep when cheap enough, generator closure otherwise.
pub struct Auto;

impl OrbitStrategy for FullSweep {
    fn name(&self) -> &'static str {
        "sweep"
    }

    fn estimated_actions(&self, space: &dyn ActionSpace, objects: u128) -> u128 {
        space.group_order().saturating_mul(objects)
    }

    fn orbit(&self, space: &dyn ActionSpace, start: &[u32]) -> Vec<Key> {
        let set: BTreeSet<Key> = space.group_elements().iter().map(|g| space.act(g, start)).collect();
        set.into_iter().collect()
    }
}

impl OrbitStrategy for GeneratorBfs {
    fn name(&self) -> &'static str {
        "bfs"
    }

    fn estimated_actions(&self, space: &dyn ActionSpace, objects: u128) -> u128 {
        (space.generators().len() as u128).saturating_mul(objects)
    }

    fn orbit(&self, space: &dyn ActionSpace, start: &[u32]) -> Vec<Key> {
        let mut seen: std::collections::HashSet<Key> = std::collections::HashSet::from([start.to_vec()]);
        let mut frontier = vec![start.to_vec()];
        while let Some(x) = frontier.pop() {
            for g in space.generators() {
                let y = space.act(g, &x);
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    frontier.push(y);
                }
            }
        }
        let mut members: Vec<Key> = seen.into_iter().collect();
        members.sort_unstable();
        members
    }
}

impl Auto {
    fn pick(space: &dyn ActionSpace, objects: u128) -> &'static dyn OrbitStrategy {
        if FullSweep.estimated_actions(space, objects) <= SWEEP_THRESHOLD {
            &FullSweep
        } else {
            &GeneratorBfs
        }
    }

    /// The concrete strategy `auto` delegates to.
    pub fn resolve(space: &dyn ActionSpace, objects: u128) -> &'static str {
        Self::pick(space, objects).name()
    }
}

impl OrbitStrategy for Auto {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn estimated_actions(&self, space: &dyn ActionSpace, objects: u128) -> u128 {
        Self::pick(space, objects).estimated_actions(space, objects)
    }

    /// Without a ground-set size at hand, judges by the orbit-size bound `|G|`.
    fn orbit(&self, space: &dyn ActionSpace, start: &[u32]) -> Vec<Key> {
        Self::pick(space, 1).orbit(space, start)
    }
}

fn registry() -> &'static HashMap<&'static str, Box<dyn OrbitStrategy>> {
    static REG: OnceLock<HashMap<&'static str, Box<dyn OrbitStrategy>>> = OnceLock::new();
    REG.get_or_init(|| {
        let all: Vec<Box<dyn OrbitStrategy>> = vec![Box::new(FullSweep), Box::new(GeneratorBfs), Box::new(Auto)];
        all.into_iter().map(|s| (s.name(), s)).collect()
    })
}

/// Registered strategy names, sorted.
pub fn strategies() -> Vec<&'static str> {
    let mut names: Vec<_> = registry().keys().copied().collect();
    names.sort_unstable();
    names
}

pub fn strategy(name: &str) -> Result<&'static dyn OrbitStrategy> {
    registry().get(name).map(|s| s.as_ref()).ok_or_else(|| Error::UnknownStrategy(name.into()))
}
