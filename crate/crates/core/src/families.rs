//! The explicit groups: SL(2,4), the block families H, M, N, G = HM inside
//! SL(2n,4), and unitriangular groups.
//!
//! Block indices in this module are 0-based; the block `(i, j)` with
//! `j - i = gap` sits on the `gap`-th super-diagonal.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::ChainConfig;
use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::gf4::{enumerate_sl2, Gf4, Mat2};
use crate::group::GroupHandle;
use crate::matrix::Matrix;
use crate::series::{self, derived_series, gamma, iterated_commutator_chain, strict_gap};

/// Generators of SL(2,4): the torus element `diag(α, α²)` and
/// `[[1,1],[1,0]]`, a transvection times the Weyl element.
pub fn sl2_generators() -> [Mat2; 2] {
    [
        Mat2::new(Gf4::ALPHA, Gf4::ZERO, Gf4::ZERO, Gf4::ALPHA_SQ),
        Mat2::new(Gf4::ONE, Gf4::ONE, Gf4::ONE, Gf4::ZERO),
    ]
}

/// SL(2,4) as a 2×2 matrix group.
pub fn sl2_group() -> GroupHandle<Matrix> {
    let gens = sl2_generators()
        .iter()
        .map(|a| Matrix::block_diagonal(1, a))
        .collect();
    GroupHandle::new(Matrix::identity(2), gens).with_label("SL(2,4)")
}

/// Additive generators of `{a·B}`: `B` and `αB`.
fn additive_span(basis: &[Mat2]) -> Vec<Mat2> {
    basis
        .iter()
        .flat_map(|b| [*b, b.scale(Gf4::ALPHA)])
        .collect()
}

fn matrix_unit_basis() -> Vec<Mat2> {
    (0..4)
        .map(|k| {
            let mut codes = [0u8; 4];
            codes[k] = 1;
            Mat2::from_codes(codes)
        })
        .collect()
}

/// Rule for a single strictly-upper block of a unitriangular member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockRule {
    Zero,
    TraceZero,
    Scalar,
    Any,
}

impl BlockRule {
    pub fn allows(self, b: &Mat2) -> bool {
        match self {
            BlockRule::Zero => b.is_zero(),
            BlockRule::TraceZero => b.trace().is_zero(),
            BlockRule::Scalar => b.is_scalar(),
            BlockRule::Any => true,
        }
    }

    /// Every block the rule allows, by enumeration of all 256 matrices.
    pub fn allowed(self) -> Vec<Mat2> {
        Mat2::all().filter(|b| self.allows(b)).collect()
    }
}

/// The named subgroups of the block family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Member {
    H,
    M,
    N,
    G,
    /// `[G, ᵈN]`
    IteratedCommutator(usize),
    /// `γ_d(N)`, `d ≥ 1`
    LowerCentral(usize),
}

impl Member {
    /// Resolves `M`, `N`, `H`, `G`, `GN_d`, `gamma_d_N` (with `d` taken from
    /// the argument) or the same names with a literal number in place of `d`.
    pub fn parse(name: &str, d: usize) -> Result<Member> {
        let unknown = || Error::UnknownPredicate(name.to_string());
        let num = |s: &str| -> Result<usize> {
            if s == "d" {
                Ok(d)
            } else {
                s.parse().map_err(|_| unknown())
            }
        };
        match name {
            "H" => Ok(Member::H),
            "M" => Ok(Member::M),
            "N" => Ok(Member::N),
            "G" => Ok(Member::G),
            _ => {
                if let Some(rest) = name.strip_prefix("GN_") {
                    Ok(Member::IteratedCommutator(num(rest)?))
                } else if let Some(rest) = name
                    .strip_prefix("gamma_")
                    .and_then(|r| r.strip_suffix("_N"))
                {
                    let d = num(rest)?;
                    if d == 0 {
                        return Err(unknown());
                    }
                    Ok(Member::LowerCentral(d))
                } else {
                    Err(unknown())
                }
            }
        }
    }

    /// Rule for the block at distance `gap ≥ 1` above the diagonal, for the
    /// unitriangular members; `None` for `H`, `G` and `[G, ⁰N]`.
    pub fn block_rule(self, gap: usize) -> Option<BlockRule> {
        Some(match self {
            Member::M if gap == 1 => BlockRule::TraceZero,
            Member::N if gap == 1 => BlockRule::Scalar,
            Member::M | Member::N => BlockRule::Any,
            Member::IteratedCommutator(0) | Member::H | Member::G => return None,
            Member::IteratedCommutator(d) if gap <= d => BlockRule::Zero,
            Member::IteratedCommutator(d) if gap == d + 1 => BlockRule::TraceZero,
            Member::IteratedCommutator(_) => BlockRule::Any,
            Member::LowerCentral(d) if gap < d => BlockRule::Zero,
            Member::LowerCentral(d) if gap == d => BlockRule::Scalar,
            Member::LowerCentral(_) => BlockRule::Any,
        })
    }
}

impl FromStr for Member {
    type Err = Error;
    fn from_str(s: &str) -> Result<Member> {
        Member::parse(s, 0)
    }
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Member::H => f.write_str("H"),
            Member::M => f.write_str("M"),
            Member::N => f.write_str("N"),
            Member::G => f.write_str("G"),
            Member::IteratedCommutator(d) => write!(f, "GN_{d}"),
            Member::LowerCentral(d) => write!(f, "gamma_{d}_N"),
        }
    }
}

/// Closed-form membership of `x` in a member of the SL(2n,4) family with
/// `n` blocks.
pub fn structural_member(n: usize, member: Member, x: &Matrix) -> bool {
    if x.dim() != 2 * n {
        return false;
    }
    match member {
        Member::H => {
            let a = x.block(0, 0);
            a.det() == Gf4::ONE && *x == Matrix::block_diagonal(n, &a)
        }
        Member::G | Member::IteratedCommutator(0) => {
            let a = x.block(0, 0);
            if a.det() != Gf4::ONE {
                return false;
            }
            let h_inv = Matrix::block_diagonal(n, &a.inverse().expect("det 1"));
            structural_member(n, Member::M, &h_inv.matmul(x))
        }
        _ => {
            if !x.is_block_unitriangular() {
                return false;
            }
            (0..n).all(|i| {
                (i + 1..n).all(|j| {
                    let rule = member.block_rule(j - i).expect("unitriangular member");
                    rule.allows(&x.block(i, j))
                })
            })
        }
    }
}

/// Number of matrices satisfying the structural predicate, counted block
/// by block over the enumerated allowed sets.
pub fn structural_count(n: usize, member: Member) -> BigUint {
    let sl2 = BigUint::from(enumerate_sl2().len());
    match member {
        Member::H => sl2,
        Member::G | Member::IteratedCommutator(0) => sl2 * structural_count(n, Member::M),
        _ => {
            let mut count = BigUint::from(1u32);
            for i in 0..n {
                for j in i + 1..n {
                    let rule = member.block_rule(j - i).expect("unitriangular member");
                    count *= BigUint::from(rule.allowed().len());
                }
            }
            count
        }
    }
}

/// A uniformly random matrix satisfying the structural predicate.
pub fn structural_sample(n: usize, member: Member, rng: &mut ChaCha8Rng) -> Matrix {
    let sl2 = enumerate_sl2();
    match member {
        Member::H => Matrix::block_diagonal(n, &sl2[rng.gen_range(0..sl2.len())]),
        Member::G | Member::IteratedCommutator(0) => {
            let h = structural_sample(n, Member::H, rng);
            h.matmul(&structural_sample(n, Member::M, rng))
        }
        _ => {
            let mut x = Matrix::block_identity(n);
            for i in 0..n {
                for j in i + 1..n {
                    let allowed = member.block_rule(j - i).expect("unitriangular").allowed();
                    x.set_block(i, j, &allowed[rng.gen_range(0..allowed.len())]);
                }
            }
            x
        }
    }
}

/// Generators of `H`, `M`, `N` and `G = HM` inside SL(2n,4).
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub n: usize,
    pub h: Vec<Matrix>,
    pub m: Vec<Matrix>,
    pub normal: Vec<Matrix>,
    pub g: Vec<Matrix>,
}

pub fn build_family(n: usize) -> Result<FamilySpec> {
    if !(2..=8).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "block dimension n = {n} outside 2..=8"
        )));
    }
    let h: Vec<Matrix> = sl2_generators()
        .iter()
        .map(|a| Matrix::block_diagonal(n, a))
        .collect();
    let t_gens = additive_span(&crate::gf4::trace_zero_basis());
    let scalar_gens = additive_span(&[Mat2::IDENTITY]);
    let full_gens = additive_span(&matrix_unit_basis());

    let mut higher = Vec::new();
    for i in 0..n {
        for j in i + 2..n {
            for r in &full_gens {
                higher.push(Matrix::elementary_block(n, i, j, r));
            }
        }
    }
    let mut m = Vec::new();
    let mut normal = Vec::new();
    for i in 0..n - 1 {
        for b in &t_gens {
            m.push(Matrix::elementary_block(n, i, i + 1, b));
        }
        for b in &scalar_gens {
            normal.push(Matrix::elementary_block(n, i, i + 1, b));
        }
    }
    m.extend(higher.iter().copied());
    normal.extend(higher);
    let g = h.iter().chain(&m).copied().collect();
    Ok(FamilySpec { n, h, m, normal, g })
}

impl FamilySpec {
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn generators(&self, member: Member) -> Option<&[Matrix]> {
        match member {
            Member::H => Some(&self.h),
            Member::M => Some(&self.m),
            Member::N => Some(&self.normal),
            Member::G => Some(&self.g),
            _ => None,
        }
    }

    /// `H`, `M`, `N` or `G` with its structural predicate attached.
    pub fn handle(&self, member: Member, config: ChainConfig) -> Result<GroupHandle<Matrix>> {
        let gens = self
            .generators(member)
            .ok_or_else(|| Error::InvalidParameter(format!("{member} has no fixed generators")))?;
        let n = self.n;
        Ok(
            GroupHandle::new(Matrix::identity(self.dim()), gens.to_vec())
                .with_config(config)
                .with_label(format!("sl2n:n={n}:{member}"))
                .with_oracle(Arc::new(move |x: &Matrix| structural_member(n, member, x))),
        )
    }

    pub fn structural_member(&self, member: Member, x: &Matrix) -> bool {
        structural_member(self.n, member, x)
    }
}

/// Attaches the structural predicate of `member` to a computed group.
pub fn attach_oracle(group: GroupHandle<Matrix>, n: usize, member: Member) -> GroupHandle<Matrix> {
    group
        .with_label(format!("sl2n:n={n}:{member}"))
        .with_oracle(Arc::new(move |x: &Matrix| structural_member(n, member, x)))
}

/// Outcome of [`cross_validate`] for one `(n, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossValidation {
    pub n: usize,
    pub d: usize,
    pub iterated_order: String,
    pub iterated_count: String,
    pub gamma_order: String,
    pub gamma_count: String,
    pub samples_checked: usize,
    pub strict_gap: bool,
    /// Block literal of a `γ_d(N)` generator outside `[G, ᵈN]`.
    pub witness: Option<String>,
}

/// Checks the closed forms of `[G, ᵈN]` and `γ_d(N)` against chain
/// computations: orders against enumerated counts, computed generators
/// against the predicates, sampled predicate members against the chains,
/// and the strict gap for `d < n`.
pub fn cross_validate(
    fam: &FamilySpec,
    d: usize,
    config: ChainConfig,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<CrossValidation> {
    if d == 0 {
        return Err(Error::InvalidParameter(
            "cross validation needs d >= 1".into(),
        ));
    }
    let n = fam.n;
    let g = fam.handle(Member::G, config)?;
    let normal = fam.handle(Member::N, config)?;
    let chain = iterated_commutator_chain(&g, &normal, d)?;
    let iterated = chain.term(d).expect("term d computed").clone();
    let gamma_n = gamma(&normal, d);

    let mut checks = Vec::new();
    for (member, group) in [
        (Member::IteratedCommutator(d), &iterated),
        (Member::LowerCentral(d), &gamma_n),
    ] {
        let count = structural_count(n, member);
        let order = group.order();
        if order != count {
            return Err(Error::Verification(format!(
                "{member}: chain order {order} but structural count {count}"
            )));
        }
        if let Some(bad) = group
            .generators()
            .iter()
            .find(|x| !structural_member(n, member, x))
        {
            return Err(Error::Verification(format!(
                "{member}: computed generator {} violates the predicate",
                bad.to_block_literal()
            )));
        }
        for _ in 0..samples {
            let x = structural_sample(n, member, rng);
            if !group.contains(&x) {
                return Err(Error::Verification(format!(
                    "{member}: predicate member {} not in the computed group",
                    x.to_block_literal()
                )));
            }
        }
        checks.push((order, count));
    }

    let gap = strict_gap(&g, &normal, d)?;
    if d < n && !gap.strict {
        return Err(Error::Verification(format!(
            "expected gamma_{d}(N) > [G,{d}N] for n = {n}"
        )));
    }
    Ok(CrossValidation {
        n,
        d,
        iterated_order: checks[0].0.to_string(),
        iterated_count: checks[0].1.to_string(),
        gamma_order: checks[1].0.to_string(),
        gamma_count: checks[1].1.to_string(),
        samples_checked: 2 * samples,
        strict_gap: gap.strict,
        witness: gap.witness.map(|w| w.to_block_literal()),
    })
}

/// Outcome of [`structural_validate`]: predicate-level evidence only, no
/// chains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralValidation {
    pub n: usize,
    pub d: usize,
    pub iterated_count: String,
    pub gamma_count: String,
    /// `E_{1,d+1}(I)` satisfies the `γ_d(N)` predicate but not `[G, ᵈN]`.
    pub witness: String,
    pub witness_separates: bool,
    /// Generators of `H`, `M`, `N`, `G` satisfy their predicates.
    pub generators_ok: bool,
    /// Sampled commutators `[x, y]` with `x` in the `(d-1)`-th term and
    /// `y ∈ N` satisfy the `d`-th predicate, for both series.
    pub commutators_ok: bool,
    /// Sampled products and inverses stay inside each predicate.
    pub closure_ok: bool,
    pub samples_checked: usize,
}

impl StructuralValidation {
    pub fn holds(&self) -> bool {
        self.witness_separates && self.generators_ok && self.commutators_ok && self.closure_ok
    }
}

/// `E_{1,d+1}(I)`: lies in `γ_d(N)` but not in `[G,ᵈN]` for `d < n`.
pub fn structural_witness(n: usize, d: usize) -> Matrix {
    Matrix::elementary_block(n, 0, d, &Mat2::IDENTITY)
}

/// The structural side of [`cross_validate`], feasible for every `n ≤ 8`.
pub fn structural_validate(
    fam: &FamilySpec,
    d: usize,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<StructuralValidation> {
    let n = fam.n;
    if d == 0 || d >= n {
        return Err(Error::InvalidParameter(format!("d = {d} outside 1..{n}")));
    }
    let iterated = Member::IteratedCommutator(d);
    let lower = Member::LowerCentral(d);
    let witness = structural_witness(n, d);
    let witness_separates =
        structural_member(n, lower, &witness) && !structural_member(n, iterated, &witness);
    let generators_ok = [Member::H, Member::M, Member::N, Member::G]
        .iter()
        .all(|&m| {
            fam.generators(m)
                .unwrap_or(&[])
                .iter()
                .all(|x| structural_member(n, m, x))
        });
    let prev_iterated = Member::IteratedCommutator(d - 1);
    let prev_lower = if d == 1 {
        Member::N
    } else {
        Member::LowerCentral(d - 1)
    };
    let mut commutators_ok = true;
    let mut closure_ok = true;
    for _ in 0..samples {
        let y = structural_sample(n, Member::N, rng);
        let x = structural_sample(n, prev_iterated, rng);
        commutators_ok &= structural_member(n, iterated, &x.comm(&y));
        let x = structural_sample(n, prev_lower, rng);
        commutators_ok &= structural_member(n, lower, &x.comm(&y));
        for member in [iterated, lower, Member::N, Member::G] {
            let a = structural_sample(n, member, rng);
            let b = structural_sample(n, member, rng);
            closure_ok &= structural_member(n, member, &a.matmul(&b))
                && structural_member(n, member, &a.inverse()?);
        }
    }
    Ok(StructuralValidation {
        n,
        d,
        iterated_count: structural_count(n, iterated).to_string(),
        gamma_count: structural_count(n, lower).to_string(),
        witness: witness.to_block_literal(),
        witness_separates,
        generators_ok,
        commutators_ok,
        closure_ok,
        samples_checked: samples,
    })
}

/// `U_m(F_q)` for `q ∈ {2, 4}`, generated by the elementary matrices on the
/// first super-diagonal over an additive basis of the field.
pub fn unitriangular_group(m: usize, q: u32) -> Result<GroupHandle<Matrix>> {
    if !(2..=crate::matrix::MAX_DIM).contains(&m) {
        return Err(Error::InvalidParameter(format!("m = {m} outside 2..=16")));
    }
    let scalars: &[Gf4] = match q {
        2 => &[Gf4::ONE],
        4 => &[Gf4::ONE, Gf4::ALPHA],
        _ => return Err(Error::InvalidParameter(format!("q = {q} is not 2 or 4"))),
    };
    let mut gens = Vec::new();
    for i in 0..m - 1 {
        for &c in scalars {
            let mut x = Matrix::identity(m);
            x.set(i, i + 1, c);
            gens.push(x);
        }
    }
    Ok(GroupHandle::new(Matrix::identity(m), gens).with_label(format!("unitri:m={m},q={q}")))
}

/// `q^(m(m-1)/2)`.
pub fn unitriangular_order(m: usize, q: u32) -> BigUint {
    BigUint::from(q).pow((m * (m - 1) / 2) as u32)
}

/// A triple `(m, d, t)` with `γ_d(K) > [H, ᵈK]` for `H = U_m(F_2)` and
/// `K = H^(t-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleWitness {
    pub m: usize,
    pub d: usize,
    pub t: usize,
    pub gamma_order: String,
    pub iterated_order: String,
}

/// Searches `m ≤ max_m`, then `2 ≤ t ≤ max_t`, then `1 ≤ d ≤ max_d`, and
/// returns the first triple where `γ_d(H^(t-1))` strictly contains
/// `[H, ᵈH^(t-1)]`.
pub fn counterexample_search(
    max_m: usize,
    max_d: usize,
    max_t: usize,
    config: ChainConfig,
) -> Result<Option<CounterexampleWitness>> {
    search(max_m, 1..=max_d, max_t, config)
}

/// The first witness with the given `d`, searching `m` then `t`.
pub fn counterexample_for_d(
    d: usize,
    max_m: usize,
    max_t: usize,
    config: ChainConfig,
) -> Result<Option<CounterexampleWitness>> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    search(max_m, d..=d, max_t, config)
}

fn search(
    max_m: usize,
    ds: std::ops::RangeInclusive<usize>,
    max_t: usize,
    config: ChainConfig,
) -> Result<Option<CounterexampleWitness>> {
    for m in 2..=max_m {
        let h = unitriangular_group(m, 2)?.with_config(config);
        let derived = derived_series(&h, max_t);
        for t in 2..=max_t {
            let Some(k) = derived.term(t - 1) else { break };
            if k.is_trivial() {
                break;
            }
            for d in ds.clone() {
                let gap = strict_gap(&h, k, d)?;
                if gap.strict {
                    return Ok(Some(CounterexampleWitness {
                        m,
                        d,
                        t,
                        gamma_order: gap.gamma_order.to_string(),
                        iterated_order: gap.iterated_order.to_string(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Re-derives a witness with [`strict_gap`].
pub fn recheck_witness(w: &CounterexampleWitness, config: ChainConfig) -> Result<bool> {
    let h = unitriangular_group(w.m, 2)?.with_config(config);
    let k = series::derived_series(&h, w.t)
        .term(w.t - 1)
        .cloned()
        .ok_or_else(|| Error::Verification("derived series too short".into()))?;
    Ok(strict_gap(&h, &k, w.d)?.strict)
}

/// `E_13(α·I)` in the n = 3 family: the element of `[N, N]` outside
/// `[G, N, N]`.
pub fn sl6_gap_witness() -> Matrix {
    Matrix::elementary_block(3, 0, 2, &Mat2::scalar(Gf4::ALPHA))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf4::enumerate_trace_zero;
    use crate::matrix::matrix_to_perm;
    use crate::rng::task_rng;

    #[test]
    fn sl2_generators_generate_sl2() {
        let g = sl2_group();
        assert_eq!(g.order(), BigUint::from(60u32));
        // diag(α, α²) with a single upper transvection only reaches the Borel subgroup
        let borel = GroupHandle::new(
            Matrix::identity(2),
            vec![
                Matrix::block_diagonal(1, &sl2_generators()[0]),
                Matrix::block_diagonal(1, &Mat2::from_codes([1, 1, 0, 1])),
            ],
        );
        assert_eq!(borel.order(), BigUint::from(12u32));
    }

    #[test]
    fn sl2_permutation_action() {
        let gens: Vec<Matrix> = sl2_group().generators().to_vec();
        let perms = matrix_to_perm(&gens, 2).unwrap();
        assert_eq!(perms.degree(), 16);
        assert_eq!(perms.order(), BigUint::from(60u32));
        for p in perms.generators() {
            assert_eq!(p.image(0), 0);
        }
        let id = matrix_to_perm(&[Matrix::identity(2)], 2).unwrap();
        assert!(id.is_trivial());
        assert!(matrix_to_perm(&[Matrix::zero(2)], 2).is_err());
    }

    #[test]
    fn member_names() {
        assert_eq!(
            Member::parse("GN_d", 2).unwrap(),
            Member::IteratedCommutator(2)
        );
        assert_eq!(
            Member::parse("gamma_3_N", 0).unwrap(),
            Member::LowerCentral(3)
        );
        assert_eq!("M".parse::<Member>().unwrap(), Member::M);
        assert!(matches!(
            Member::parse("Q", 1),
            Err(Error::UnknownPredicate(_))
        ));
        assert!(Member::parse("gamma_0_N", 0).is_err());
        assert_eq!(Member::LowerCentral(2).to_string(), "gamma_2_N");
    }

    #[test]
    fn structural_counts_n3() {
        assert_eq!(structural_count(3, Member::N), BigUint::from(4096u32));
        assert_eq!(structural_count(3, Member::M), BigUint::from(4u64.pow(10)));
        assert_eq!(structural_count(3, Member::G), BigUint::from(62_914_560u64));
        assert_eq!(
            structural_count(3, Member::IteratedCommutator(1)),
            BigUint::from(64u32)
        );
        assert_eq!(
            structural_count(3, Member::LowerCentral(2)),
            BigUint::from(4u32)
        );
        assert_eq!(
            structural_count(3, Member::IteratedCommutator(2)),
            BigUint::from(1u32)
        );
    }

    #[test]
    fn predicates_on_named_elements() {
        for p in enumerate_trace_zero() {
            let x = Matrix::elementary_block(3, 0, 2, &p);
            assert!(structural_member(3, Member::IteratedCommutator(1), &x));
        }
        for d in Gf4::ALL {
            let x = Matrix::elementary_block(3, 0, 2, &Mat2::scalar(d));
            assert!(structural_member(3, Member::LowerCentral(2), &x));
        }
        let mut rng = task_rng(1, 0);
        for _ in 0..50 {
            let x = structural_sample(3, Member::G, &mut rng);
            if !x.is_identity() {
                assert!(!structural_member(3, Member::IteratedCommutator(2), &x));
            }
            assert!(structural_member(3, Member::G, &x));
            assert_eq!(x.det(), Gf4::ONE);
        }
        assert!(structural_member(
            3,
            Member::IteratedCommutator(2),
            &Matrix::identity(6)
        ));
        assert!(!structural_member(3, Member::M, &Matrix::identity(4)));
    }

    #[test]
    fn generators_satisfy_their_predicates() {
        for n in 2..=4 {
            let fam = build_family(n).unwrap();
            for member in [Member::H, Member::M, Member::N, Member::G] {
                for x in fam.generators(member).unwrap() {
                    assert!(structural_member(n, member, x), "{member} n={n}");
                    assert_eq!(x.det(), Gf4::ONE);
                }
            }
        }
        assert!(build_family(1).is_err());
    }

    #[test]
    fn predicates_are_closed_under_products_and_inverses() {
        let mut rng = task_rng(2, 0);
        for n in [3, 4] {
            for member in [
                Member::H,
                Member::M,
                Member::N,
                Member::G,
                Member::IteratedCommutator(1),
                Member::IteratedCommutator(2),
                Member::LowerCentral(2),
                Member::LowerCentral(3),
            ] {
                for _ in 0..40 {
                    let x = structural_sample(n, member, &mut rng);
                    let y = structural_sample(n, member, &mut rng);
                    assert!(structural_member(n, member, &x.matmul(&y)), "{member}");
                    assert!(structural_member(n, member, &x.inv()), "{member}");
                }
            }
        }
    }

    #[test]
    fn small_family_orders() {
        let fam = build_family(2).unwrap();
        let m = fam.handle(Member::M, ChainConfig::default()).unwrap();
        assert_eq!(m.order(), BigUint::from(64u32));
    }

    #[test]
    fn unitriangular_orders() {
        assert_eq!(
            unitriangular_group(3, 2).unwrap().order(),
            BigUint::from(8u32)
        );
        assert_eq!(
            unitriangular_group(4, 2).unwrap().order(),
            BigUint::from(64u32)
        );
        let u2 = unitriangular_group(2, 2).unwrap();
        assert_eq!(u2.order(), BigUint::from(2u32));
        assert!(crate::series::derived_subgroup(&u2).is_trivial());
        assert_eq!(
            unitriangular_group(3, 4).unwrap().order(),
            unitriangular_order(3, 4)
        );
        assert!(unitriangular_group(3, 3).is_err());
    }

    #[test]
    fn structural_validation_for_n5() {
        let fam = build_family(5).unwrap();
        let mut rng = task_rng(3, 0);
        for d in 1..5 {
            let v = structural_validate(&fam, d, 10, &mut rng).unwrap();
            assert!(v.holds(), "{v:?}");
        }
        assert!(structural_validate(&fam, 5, 1, &mut rng).is_err());
    }

    #[test]
    fn search_finds_no_witness_for_m2() {
        assert_eq!(
            counterexample_search(2, 3, 3, ChainConfig::default()).unwrap(),
            None
        );
    }
}
