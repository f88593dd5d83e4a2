//! Stabilizer chains (bases and strong generating sets) via Schreier–Sims.
//!
//! Above a configurable degree the chain is first filled from random
//! elements (product replacement); every build then ends with the
//! deterministic Schreier-generator check, so orders are always exact.

use std::collections::HashMap;

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::element::GroupElement;
use crate::rng::task_rng;

/// Knobs for chain construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainConfig {
    pub seed: u64,
    /// Domains larger than this use the randomized phase before verification.
    pub random_threshold: usize,
    /// Consecutive successful random sifts that end the randomized phase.
    pub random_stop: usize,
}

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig {
            seed: 0,
            random_threshold: 512,
            random_stop: 24,
        }
    }
}

impl ChainConfig {
    pub fn with_seed(seed: u64) -> Self {
        ChainConfig {
            seed,
            ..ChainConfig::default()
        }
    }
}

#[derive(Clone, Debug)]
enum OrbitIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<usize, u32>),
}

const DENSE_LIMIT: usize = 1 << 20;
const ABSENT: u32 = u32::MAX;

impl OrbitIndex {
    fn new(degree: usize) -> OrbitIndex {
        if degree <= DENSE_LIMIT {
            OrbitIndex::Dense(vec![ABSENT; degree])
        } else {
            OrbitIndex::Sparse(HashMap::new())
        }
    }

    #[inline]
    fn get(&self, p: usize) -> Option<usize> {
        match self {
            OrbitIndex::Dense(v) => match v.get(p) {
                Some(&k) if k != ABSENT => Some(k as usize),
                _ => None,
            },
            OrbitIndex::Sparse(m) => m.get(&p).map(|&k| k as usize),
        }
    }

    fn insert(&mut self, p: usize, k: usize) {
        match self {
            OrbitIndex::Dense(v) => v[p] = k as u32,
            OrbitIndex::Sparse(m) => {
                m.insert(p, k as u32);
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Level<E> {
    point: usize,
    /// Strong generators fixing all earlier base points.
    gens: Vec<E>,
    gens_inv: Vec<E>,
    orbit: Vec<usize>,
    index: OrbitIndex,
    /// `transversal[k]` maps `point` to `orbit[k]`.
    transversal: Vec<E>,
    transversal_inv: Vec<E>,
    /// Schreier generators for (orbit index < .0, generator index < .1) are known to sift.
    checked: (usize, usize),
}

impl<E: GroupElement> Level<E> {
    fn new(point: usize, identity: &E) -> Level<E> {
        let mut index = OrbitIndex::new(identity.degree());
        index.insert(point, 0);
        Level {
            point,
            gens: Vec::new(),
            gens_inv: Vec::new(),
            orbit: vec![point],
            index,
            transversal: vec![identity.clone()],
            transversal_inv: vec![identity.clone()],
            checked: (0, 0),
        }
    }

    fn try_extend(&mut self, k: usize, gi: usize) {
        let q = self.gens[gi].image(self.orbit[k]);
        if self.index.get(q).is_none() {
            let pos = self.orbit.len();
            self.index.insert(q, pos);
            self.orbit.push(q);
            self.transversal
                .push(self.transversal[k].mul(&self.gens[gi]));
            self.transversal_inv
                .push(self.gens_inv[gi].mul(&self.transversal_inv[k]));
        }
    }

    fn add_gen(&mut self, g: E) {
        self.gens_inv.push(g.inv());
        self.gens.push(g);
        let gi = self.gens.len() - 1;
        let old_len = self.orbit.len();
        for k in 0..old_len {
            self.try_extend(k, gi);
        }
        let mut k = old_len;
        while k < self.orbit.len() {
            for gj in 0..self.gens.len() {
                self.try_extend(k, gj);
            }
            k += 1;
        }
    }
}

/// A base and strong generating set with explicit transversals.
#[derive(Clone, Debug)]
pub struct StabilizerChain<E> {
    identity: E,
    levels: Vec<Level<E>>,
}

impl<E: GroupElement> StabilizerChain<E> {
    /// The chain of the trivial group.
    pub fn trivial(identity: E) -> Self {
        StabilizerChain {
            identity,
            levels: Vec::new(),
        }
    }

    /// Builds a verified chain for `⟨gens⟩`.
    pub fn build(identity: E, gens: &[E], config: &ChainConfig) -> Self {
        let mut chain = StabilizerChain::trivial(identity);
        chain.extend_group(gens, config);
        chain
    }

    /// Rebuilds a chain for a declared base and strong generating set, then
    /// runs the deterministic verification (which completes it if needed).
    pub fn from_base_and_strong_generators(identity: E, base: &[usize], strong: &[E]) -> Self {
        let mut chain = StabilizerChain::trivial(identity.clone());
        for &b in base {
            chain.levels.push(Level::new(b, &identity));
        }
        for g in strong.iter().filter(|g| !g.is_identity()) {
            let depth = chain.fixed_prefix(g);
            chain.add_strong_generator(g.clone(), 0, depth);
        }
        chain.complete();
        chain
    }

    pub fn identity(&self) -> &E {
        &self.identity
    }

    pub fn degree(&self) -> usize {
        self.identity.degree()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Generators of the whole group held by the chain (level 0).
    pub fn generators(&self) -> &[E] {
        self.levels
            .first()
            .map(|l| l.gens.as_slice())
            .unwrap_or(&[])
    }

    /// All distinct strong generators, in level order.
    pub fn strong_generators(&self) -> Vec<E> {
        let mut out: Vec<E> = Vec::new();
        for level in &self.levels {
            for g in &level.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| {
            acc * BigUint::from(l.orbit.len())
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.levels.iter().all(|l| l.orbit.len() == 1)
    }

    /// Sifts `g` from level `from`; returns the residue and the level where
    /// sifting stopped (`levels.len()` if it passed every level).
    pub fn sift_from(&self, g: &E, from: usize) -> (E, usize) {
        let mut h = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let p = h.image(level.point);
            match level.index.get(p) {
                None => return (h, l),
                Some(k) => h = h.mul(&level.transversal_inv[k]),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &E) -> bool {
        let (residue, depth) = self.sift_from(g, 0);
        depth == self.levels.len() && residue.is_identity()
    }

    /// Factors a member as `u_1 ⋯ u_k` with one transversal element per level,
    /// returned in application order; `None` for non-members.
    pub fn factorize(&self, g: &E) -> Option<Vec<E>> {
        let mut h = g.clone();
        let mut reps = Vec::with_capacity(self.levels.len());
        for level in &self.levels {
            let k = level.index.get(h.image(level.point))?;
            reps.push(level.transversal[k].clone());
            h = h.mul(&level.transversal_inv[k]);
        }
        h.is_identity().then(|| {
            reps.reverse();
            reps
        })
    }

    /// A uniformly random element, as a product of transversal elements.
    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> E {
        let mut g = self.identity.clone();
        for level in self.levels.iter().rev() {
            let k = rng.gen_range(0..level.orbit.len());
            g = g.mul(&level.transversal[k]);
        }
        g
    }

    /// Enumerates every element; only sensible for small groups.
    pub fn elements(&self) -> Vec<E> {
        let mut out = vec![self.identity.clone()];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for g in &out {
                for u in &level.transversal {
                    next.push(g.mul(u));
                }
            }
            out = next;
        }
        out
    }

    /// Adds `gens` to the group and restores a verified chain. Returns true
    /// if the group grew.
    pub fn extend_group(&mut self, gens: &[E], config: &ChainConfig) -> bool {
        let mut grew = false;
        for g in gens {
            let (residue, depth) = self.sift_from(g, 0);
            if depth == self.levels.len() && residue.is_identity() {
                continue;
            }
            // generators of the whole group always sit at level 0
            self.add_strong_generator(residue, 0, depth);
            grew = true;
        }
        if grew {
            if self.degree() > config.random_threshold {
                self.random_phase(config);
            }
            self.complete();
        }
        grew
    }

    /// Number of leading base points fixed by `g`.
    fn fixed_prefix(&self, g: &E) -> usize {
        self.levels
            .iter()
            .take_while(|l| g.image(l.point) == l.point)
            .count()
    }

    /// Adds `g` to the strong generators of levels `from..=to`, appending a
    /// new base point when `to` is one past the last level.
    fn add_strong_generator(&mut self, g: E, from: usize, to: usize) {
        debug_assert!(!g.is_identity());
        if to >= self.levels.len() {
            let point = g
                .first_moved_point()
                .expect("nontrivial element moves a point");
            self.levels.push(Level::new(point, &self.identity));
        }
        let to = to.min(self.levels.len() - 1);
        for l in from..=to {
            self.levels[l].add_gen(g.clone());
        }
    }

    fn random_phase(&mut self, config: &ChainConfig) {
        let gens = self.generators().to_vec();
        if gens.is_empty() {
            return;
        }
        let mut pr = ProductReplacement::new(&gens, task_rng(config.seed, 0x5eed));
        let mut streak = 0;
        while streak < config.random_stop {
            let g = pr.next_element();
            let (residue, depth) = self.sift_from(&g, 0);
            if depth == self.levels.len() && residue.is_identity() {
                streak += 1;
                continue;
            }
            streak = 0;
            let from = if depth == 0 { 0 } else { 1 };
            self.add_strong_generator(residue, from, depth);
        }
    }

    /// Deterministic Schreier–Sims: checks every Schreier generator, adding
    /// residues until all of them sift.
    fn complete(&mut self) {
        let mut i = self.levels.len();
        while i > 0 {
            let l = i - 1;
            match self.failing_schreier_generator(l) {
                Some((residue, depth)) => {
                    self.add_strong_generator(residue, l + 1, depth);
                    i = depth.min(self.levels.len() - 1) + 1;
                }
                None => {
                    let level = &mut self.levels[l];
                    level.checked = (level.orbit.len(), level.gens.len());
                    i -= 1;
                }
            }
        }
    }

    fn failing_schreier_generator(&self, l: usize) -> Option<(E, usize)> {
        let level = &self.levels[l];
        let (ck, cg) = level.checked;
        for k in 0..level.orbit.len() {
            for (gi, s) in level.gens.iter().enumerate() {
                if k < ck && gi < cg {
                    continue;
                }
                let q = s.image(level.orbit[k]);
                let kq = level.index.get(q).expect("orbit is closed");
                let h = level.transversal[k].mul(s).mul(&level.transversal_inv[kq]);
                if h.is_identity() {
                    continue;
                }
                let (residue, depth) = self.sift_from(&h, l + 1);
                if depth < self.levels.len() || !residue.is_identity() {
                    return Some((residue, depth));
                }
            }
        }
        None
    }
}

/// Product-replacement random element generator.
pub struct ProductReplacement<E> {
    state: Vec<E>,
    acc: E,
    rng: ChaCha8Rng,
}

impl<E: GroupElement> ProductReplacement<E> {
    pub fn new(gens: &[E], rng: ChaCha8Rng) -> Self {
        assert!(!gens.is_empty());
        let mut state = Vec::new();
        while state.len() < 10.max(gens.len()) {
            state.push(gens[state.len() % gens.len()].clone());
        }
        let acc = gens[0].identity_like();
        let mut pr = ProductReplacement { state, acc, rng };
        for _ in 0..50 {
            pr.next_element();
        }
        pr
    }

    pub fn next_element(&mut self) -> E {
        let n = self.state.len();
        let i = self.rng.gen_range(0..n);
        let mut j = self.rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let other = if self.rng.gen_bool(0.5) {
            self.state[j].clone()
        } else {
            self.state[j].inv()
        };
        self.state[i] = if self.rng.gen_bool(0.5) {
            self.state[i].mul(&other)
        } else {
            other.mul(&self.state[i])
        };
        self.acc = self.acc.mul(&self.state[i]);
        self.acc.clone()
    }
}
