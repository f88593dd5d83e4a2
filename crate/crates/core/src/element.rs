//! Group elements acting on a finite set of points.
//!
//! Every element type acts on the right: `p^(gh) = (p^g)^h`, and
//! `g.mul(h)` applies `g` first.

use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub trait GroupElement: Clone + Eq + Hash + fmt::Debug + Send + Sync {
    /// Number of points in the domain the element acts on.
    fn degree(&self) -> usize;

    fn image(&self, point: usize) -> usize;

    /// Product `self · rhs`.
    fn mul(&self, rhs: &Self) -> Self;

    fn inv(&self) -> Self;

    /// The identity on the same domain as `self`.
    fn identity_like(&self) -> Self;

    fn is_identity(&self) -> bool;

    /// A point moved by `self`, preferring points that make short bases.
    fn first_moved_point(&self) -> Option<usize>;

    /// `self^by = by⁻¹ · self · by`.
    fn conj(&self, by: &Self) -> Self {
        by.inv().mul(self).mul(by)
    }

    /// `[self, other] = self⁻¹ · other⁻¹ · self · other`.
    fn comm(&self, other: &Self) -> Self {
        self.inv().mul(&other.inv()).mul(self).mul(other)
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut acc = self.identity_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

/// Left-associated commutator `[x_1, ..., x_k]`.
pub fn iterated_comm<E: GroupElement>(xs: &[E]) -> Option<E> {
    let (first, rest) = xs.split_first()?;
    Some(rest.iter().fold(first.clone(), |acc, x| acc.comm(x)))
}

/// A bijection of `{0, …, n-1}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles over `0..degree`.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Permutation> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                if p as usize >= degree || next as usize >= degree {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle point out of range 0..{degree}"
                    )));
                }
                images[p as usize] = next;
            }
        }
        Permutation::from_images(images)
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.images.len()];
        let mut order = 1u64;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = self.images[p] as usize;
                len += 1;
            }
            order = lcm(order, len);
        }
        order
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<u32>) -> Result<Permutation> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Vec<u32> {
        p.images
    }
}

impl GroupElement for Permutation {
    fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    fn mul(&self, rhs: &Self) -> Self {
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| rhs.images[i as usize])
                .collect(),
        }
    }

    fn inv(&self) -> Self {
        let mut images = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Permutation { images }
    }

    fn identity_like(&self) -> Self {
        Permutation::identity(self.images.len())
    }

    fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    fn first_moved_point(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &j)| *i as u32 != j)
            .map(|(i, _)| i)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

/// An element of a direct product, acting on disjoint copies of the
/// component domains: copy `c` occupies points `c·m .. (c+1)·m` with `m` the
/// largest component degree, and points past a component's own degree are
/// fixed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProductElement<E> {
    components: Vec<E>,
    stride: usize,
}

impl<E: Serialize> Serialize for ProductElement<E> {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.components.serialize(serializer)
    }
}

impl<'de, E: GroupElement + Deserialize<'de>> Deserialize<'de> for ProductElement<E> {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let components = Vec::<E>::deserialize(deserializer)?;
        if components.is_empty() {
            return Err(serde::de::Error::custom(
                "product element needs a component",
            ));
        }
        Ok(ProductElement::new(components))
    }
}

impl<E: GroupElement> ProductElement<E> {
    /// Panics if `components` is empty.
    pub fn new(components: Vec<E>) -> ProductElement<E> {
        assert!(!components.is_empty(), "product element needs a component");
        let stride = components
            .iter()
            .map(GroupElement::degree)
            .max()
            .unwrap_or(0);
        ProductElement { components, stride }
    }

    pub fn identity(component_identity: &E, len: usize) -> ProductElement<E> {
        ProductElement::new(vec![component_identity.clone(); len])
    }

    /// `g` at coordinate `index`, identity elsewhere.
    pub fn embed(g: &E, index: usize, len: usize) -> Result<ProductElement<E>> {
        if index >= len {
            return Err(Error::SubsetOutOfRange { index, len });
        }
        let mut components = vec![g.identity_like(); len];
        components[index] = g.clone();
        Ok(ProductElement::new(components))
    }

    pub fn components(&self) -> &[E] {
        &self.components
    }

    pub fn into_components(self) -> Vec<E> {
        self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn project(&self, index: usize) -> Result<&E> {
        self.components.get(index).ok_or(Error::SubsetOutOfRange {
            index,
            len: self.components.len(),
        })
    }

    /// Concatenation `(self, other)`, an element of `G^(k+l)`.
    pub fn concat(&self, other: &ProductElement<E>) -> ProductElement<E> {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        ProductElement::new(components)
    }

    pub fn split_at(&self, mid: usize) -> (ProductElement<E>, ProductElement<E>) {
        let (a, b) = self.components.split_at(mid);
        (
            ProductElement::new(a.to_vec()),
            ProductElement::new(b.to_vec()),
        )
    }

    fn component_degree(&self) -> usize {
        self.stride
    }
}

impl<E: GroupElement> GroupElement for ProductElement<E> {
    fn degree(&self) -> usize {
        self.component_degree() * self.components.len()
    }

    #[inline]
    fn image(&self, point: usize) -> usize {
        let m = self.component_degree();
        let (c, q) = (point / m, point % m);
        let g = &self.components[c];
        if q < g.degree() {
            c * m + g.image(q)
        } else {
            point
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.components.len(), rhs.components.len());
        ProductElement {
            components: self
                .components
                .iter()
                .zip(&rhs.components)
                .map(|(a, b)| a.mul(b))
                .collect(),
            stride: self.stride.max(rhs.stride),
        }
    }

    fn inv(&self) -> Self {
        ProductElement {
            components: self.components.iter().map(GroupElement::inv).collect(),
            stride: self.stride,
        }
    }

    fn identity_like(&self) -> Self {
        ProductElement {
            components: self
                .components
                .iter()
                .map(GroupElement::identity_like)
                .collect(),
            stride: self.stride,
        }
    }

    fn is_identity(&self) -> bool {
        self.components.iter().all(GroupElement::is_identity)
    }

    fn first_moved_point(&self) -> Option<usize> {
        let m = self.component_degree();
        self.components
            .iter()
            .enumerate()
            .find_map(|(c, g)| g.first_moved_point().map(|p| c * m + p))
    }
}

impl<E: fmt::Debug> fmt::Debug for ProductElement<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, c: &[u32]) -> Permutation {
        Permutation::from_cycles(n, &[c]).unwrap()
    }

    #[test]
    fn right_action_convention() {
        let a = cyc(3, &[0, 1]);
        let b = cyc(3, &[1, 2]);
        let ab = a.mul(&b);
        for p in 0..3 {
            assert_eq!(ab.image(p), b.image(a.image(p)));
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn inverse_and_order() {
        let p = Permutation::from_cycles(7, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert!(p.mul(&p.inv()).is_identity());
        assert_eq!(p.order(), 6);
        assert!(p.pow(6).is_identity());
        assert_eq!(p.first_moved_point(), Some(0));
    }

    #[test]
    fn commutator_of_commuting_elements_is_trivial() {
        let a = cyc(5, &[0, 1]);
        let b = cyc(5, &[2, 3, 4]);
        assert!(a.comm(&b).is_identity());
        assert!(!cyc(3, &[0, 1]).comm(&cyc(3, &[1, 2])).is_identity());
    }

    #[test]
    fn product_componentwise() {
        let a = cyc(3, &[0, 1, 2]);
        let x = ProductElement::new(vec![a.clone(), a.inv()]);
        let y = x.mul(&x.inv());
        assert!(y.is_identity());
        assert_eq!(x.degree(), 6);
        assert_eq!(x.image(3), 3 + a.inv().image(0));
        let e = ProductElement::embed(&a, 1, 3).unwrap();
        assert_eq!(e.project(1).unwrap(), &a);
        assert!(e.project(0).unwrap().is_identity());
        assert!(ProductElement::embed(&a, 3, 3).is_err());
        assert!(e.project(5).is_err());
    }
}
