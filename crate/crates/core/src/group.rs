//! Finitely generated groups, subgroup arithmetic and homomorphism tests.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;

use crate::chain::{ChainConfig, StabilizerChain};
use crate::element::GroupElement;
use crate::error::{Error, Result};

/// A membership predicate supplied from outside the chain engine.
pub type MembershipOracle<E> = Arc<dyn Fn(&E) -> bool + Send + Sync>;

/// A group given by generators, with a lazily built stabilizer chain.
#[derive(Clone)]
pub struct GroupHandle<E: GroupElement> {
    identity: E,
    gens: Vec<E>,
    label: Option<String>,
    oracle: Option<MembershipOracle<E>>,
    config: ChainConfig,
    chain: OnceLock<Arc<StabilizerChain<E>>>,
}

impl<E: GroupElement> GroupHandle<E> {
    /// Identity elements among `gens` are dropped.
    pub fn new(identity: E, gens: Vec<E>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_identity()).collect();
        GroupHandle {
            identity,
            gens,
            label: None,
            oracle: None,
            config: ChainConfig::default(),
            chain: OnceLock::new(),
        }
    }

    /// The trivial group on the domain of `identity`.
    pub fn trivial(identity: E) -> Self {
        GroupHandle::new(identity, Vec::new())
    }

    pub fn from_chain(chain: StabilizerChain<E>, gens: Vec<E>, config: ChainConfig) -> Self {
        let mut g = GroupHandle::new(chain.identity().clone(), gens);
        g.config = config;
        let _ = g.chain.set(Arc::new(chain));
        g
    }

    /// Installs a chain computed elsewhere (e.g. reloaded from a cache);
    /// ignored if a chain is already present.
    pub fn with_chain(self, chain: StabilizerChain<E>) -> Self {
        let _ = self.chain.set(Arc::new(chain));
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_oracle(mut self, oracle: MembershipOracle<E>) -> Self {
        self.oracle = Some(oracle);
        self
    }

    /// Replaces the chain configuration; drops any chain already built.
    pub fn with_config(mut self, config: ChainConfig) -> Self {
        if config != self.config {
            self.config = config;
            self.chain = OnceLock::new();
        }
        self
    }

    pub fn identity(&self) -> &E {
        &self.identity
    }

    pub fn generators(&self) -> &[E] {
        &self.gens
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn oracle(&self) -> Option<&MembershipOracle<E>> {
        self.oracle.as_ref()
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    pub fn degree(&self) -> usize {
        self.identity.degree()
    }

    pub fn chain(&self) -> &StabilizerChain<E> {
        self.chain.get_or_init(|| {
            Arc::new(StabilizerChain::build(
                self.identity.clone(),
                &self.gens,
                &self.config,
            ))
        })
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty() || self.chain().is_trivial()
    }

    /// Chain membership.
    pub fn contains(&self, g: &E) -> bool {
        self.chain().contains(g)
    }

    /// Structural membership when an oracle is attached, chain membership
    /// otherwise.
    pub fn contains_structural(&self, g: &E) -> bool {
        match &self.oracle {
            Some(o) => o(g),
            None => self.contains(g),
        }
    }

    /// `self ≤ other`, by generator membership.
    pub fn is_subgroup_of(&self, other: &GroupHandle<E>) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    /// Equal as subgroups: mutual generator membership.
    pub fn same_group(&self, other: &GroupHandle<E>) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    /// First conjugate `n^g` (n a generator of `self`, g of `ambient`) that
    /// falls outside `self`, if any.
    pub fn normality_witness(&self, ambient: &GroupHandle<E>) -> Option<(E, E)> {
        for g in &ambient.gens {
            for n in &self.gens {
                if !self.contains(&n.conj(g)) {
                    return Some((n.clone(), g.clone()));
                }
            }
        }
        None
    }

    pub fn is_normal_in(&self, ambient: &GroupHandle<E>) -> bool {
        self.normality_witness(ambient).is_none()
    }

    /// Errors with a witness conjugate unless `self` is normal in `ambient`.
    pub fn ensure_normal_in(&self, ambient: &GroupHandle<E>) -> Result<()> {
        match self.normality_witness(ambient) {
            None => Ok(()),
            Some((n, g)) => Err(Error::NotNormal {
                witness: format!("{:?} conjugated by {:?}", n, g),
            }),
        }
    }

    /// `⟨self, other⟩`.
    pub fn join(&self, other: &GroupHandle<E>) -> GroupHandle<E> {
        let mut gens = self.gens.clone();
        for g in &other.gens {
            if !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        GroupHandle::new(self.identity.clone(), gens).with_config(self.config)
    }
}

impl<E: GroupElement> fmt::Debug for GroupHandle<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupHandle")
            .field("label", &self.label)
            .field("degree", &self.degree())
            .field("generators", &self.gens.len())
            .field("structural", &self.oracle.is_some())
            .finish()
    }
}

/// The smallest normal subgroup of `ambient` containing `sub`.
pub fn normal_closure<E: GroupElement>(ambient: &GroupHandle<E>, sub: &[E]) -> GroupHandle<E> {
    let config = *ambient.config();
    let mut chain = StabilizerChain::trivial(ambient.identity().clone());
    let mut gens: Vec<E> = Vec::new();
    for s in sub {
        if chain.extend_group(std::slice::from_ref(s), &config) {
            gens.push(s.clone());
        }
    }
    let mut i = 0;
    while i < gens.len() {
        for a in ambient.generators() {
            let c = gens[i].conj(a);
            if chain.extend_group(std::slice::from_ref(&c), &config) {
                gens.push(c);
            }
        }
        i += 1;
    }
    GroupHandle::from_chain(chain, gens, config)
}

/// `[H, K]`: generator commutators closed to normality in `⟨H, K⟩`.
pub fn commutator_group<E: GroupElement>(h: &GroupHandle<E>, k: &GroupHandle<E>) -> GroupHandle<E> {
    let mut comms: Vec<E> = Vec::new();
    for a in h.generators() {
        for b in k.generators() {
            let c = a.comm(b);
            if !c.is_identity() && !comms.contains(&c) {
                comms.push(c);
            }
        }
    }
    normal_closure(&h.join(k), &comms)
}

/// Two elements acting on the disjoint union of their domains.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Pair<A, B>(pub A, pub B);

impl<A: GroupElement, B: GroupElement> GroupElement for Pair<A, B> {
    fn degree(&self) -> usize {
        self.0.degree() + self.1.degree()
    }

    fn image(&self, point: usize) -> usize {
        let m = self.0.degree();
        if point < m {
            self.0.image(point)
        } else {
            m + self.1.image(point - m)
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        Pair(self.0.mul(&rhs.0), self.1.mul(&rhs.1))
    }

    fn inv(&self) -> Self {
        Pair(self.0.inv(), self.1.inv())
    }

    fn identity_like(&self) -> Self {
        Pair(self.0.identity_like(), self.1.identity_like())
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity() && self.1.is_identity()
    }

    fn first_moved_point(&self) -> Option<usize> {
        self.0
            .first_moved_point()
            .or_else(|| self.1.first_moved_point().map(|p| p + self.0.degree()))
    }
}

/// Outcome of [`hom_by_graph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomReport {
    pub is_homomorphism: bool,
    pub domain_order: BigUint,
    pub graph_order: BigUint,
    pub image_order: BigUint,
}

/// The generator map `gens[i] ↦ images[i]` together with the chain of its
/// graph `⟨(g_i, φ(g_i))⟩`.
pub struct GraphHom<E: GroupElement, F: GroupElement> {
    graph: StabilizerChain<Pair<E, F>>,
    report: HomReport,
}

impl<E: GroupElement, F: GroupElement> GraphHom<E, F> {
    pub fn new(domain: &GroupHandle<E>, images: &[F], target_identity: &F) -> Result<Self> {
        let gens = domain.generators();
        if gens.len() != images.len() {
            return Err(Error::GeneratorCountMismatch {
                generators: gens.len(),
                images: images.len(),
            });
        }
        let pairs: Vec<Pair<E, F>> = gens
            .iter()
            .zip(images)
            .map(|(g, y)| Pair(g.clone(), y.clone()))
            .collect();
        let config = *domain.config();
        let graph = StabilizerChain::build(
            Pair(domain.identity().clone(), target_identity.clone()),
            &pairs,
            &config,
        );
        let image = StabilizerChain::build(target_identity.clone(), images, &config);
        let domain_order = domain.order();
        let graph_order = graph.order();
        let report = HomReport {
            is_homomorphism: graph_order == domain_order,
            domain_order,
            graph_order,
            image_order: image.order(),
        };
        Ok(GraphHom { graph, report })
    }

    pub fn report(&self) -> &HomReport {
        &self.report
    }

    /// `φ(x)`, read off by sifting `(x, 1)` through the graph chain. `None`
    /// unless the map is a homomorphism and `x` lies in the domain.
    pub fn apply(&self, x: &E) -> Option<F> {
        if !self.report.is_homomorphism {
            return None;
        }
        let target_identity = self.graph.identity().1.clone();
        let (residue, _) = self.graph.sift_from(&Pair(x.clone(), target_identity), 0);
        residue.0.is_identity().then(|| residue.1.inv())
    }
}

/// Decides whether `gens[i] ↦ images[i]` extends to a homomorphism: the
/// graph `⟨(g_i, φ(g_i))⟩` has the order of the domain exactly then.
pub fn hom_by_graph<E: GroupElement, F: GroupElement>(
    domain: &GroupHandle<E>,
    images: &[F],
    target_identity: &F,
) -> Result<HomReport> {
    Ok(GraphHom::new(domain, images, target_identity)?.report)
}

/// Endomorphism test: `φ` is a homomorphism into `domain` whose image is
/// all of `domain`.
pub fn is_automorphism<E: GroupElement>(domain: &GroupHandle<E>, images: &[E]) -> Result<bool> {
    let report = hom_by_graph(domain, images, domain.identity())?;
    Ok(report.is_homomorphism
        && images.iter().all(|y| domain.contains(y))
        && report.image_order == report.domain_order)
}
