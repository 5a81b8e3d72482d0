//! Normal-form arithmetic in the free nilpotent Lie algebra `g_{r,c}`.
//!
//! Every bracket of two Hall elements is rewritten into an integer
//! combination of Hall elements of the summed degree. Pairs that already
//! satisfy the Hall conditions map to a single basis element; the remaining
//! case `U < V = [V1, V2]` with `V1 > U` is expanded with the Jacobi identity
//! `[U,[V1,V2]] = [[U,V1],V2] + [V1,[U,V2]]` and normalized recursively.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hall::{HallBasis, HallKind};
use crate::matrix::IntegerMatrix;

/// Integer combination of Hall elements sharing one degree.
///
/// Keys are arena indices in the owning [`HallBasis`]. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieCombination {
    degree: usize,
    terms: BTreeMap<usize, BigInt>,
}

impl LieCombination {
    pub fn zero(degree: usize) -> Self {
        LieCombination {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn single(degree: usize, index: usize) -> Self {
        Self::term(degree, index, BigInt::one())
    }

    pub fn term(degree: usize, index: usize, coeff: BigInt) -> Self {
        let mut out = Self::zero(degree);
        out.add_term(index, coeff);
        out
    }

    /// Basis element `index` of `basis`, with coefficient one.
    pub fn element(basis: &HallBasis, index: usize) -> Self {
        Self::single(basis.element(index).degree, index)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn coeff(&self, index: usize) -> BigInt {
        self.terms.get(&index).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, index: usize, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &LieCombination, scale: &BigInt) {
        debug_assert!(other.is_zero() || self.is_zero() || self.degree == other.degree);
        if scale.is_zero() {
            return;
        }
        for (&k, v) in &other.terms {
            self.add_term(k, v * scale);
        }
    }

    pub fn scaled(&self, scale: &BigInt) -> LieCombination {
        let mut out = Self::zero(self.degree);
        out.add_scaled(self, scale);
        out
    }
}

impl Add for LieCombination {
    type Output = LieCombination;

    fn add(mut self, rhs: LieCombination) -> LieCombination {
        self.add_scaled(&rhs, &BigInt::one());
        self
    }
}

impl Sub for LieCombination {
    type Output = LieCombination;

    fn sub(mut self, rhs: LieCombination) -> LieCombination {
        self.add_scaled(&rhs, &-BigInt::one());
        self
    }
}

impl Neg for LieCombination {
    type Output = LieCombination;

    fn neg(mut self) -> LieCombination {
        for v in self.terms.values_mut() {
            *v = -std::mem::take(v);
        }
        self
    }
}

type BracketCache = RwLock<HashMap<(usize, usize), Arc<LieCombination>>>;

/// The free `c`-step nilpotent Lie algebra on `r` generators, presented by a
/// Hall basis, with an optional memo table of normalized brackets.
#[derive(Debug)]
pub struct FreeNilpotentLie {
    basis: HallBasis,
    cache: Option<BracketCache>,
}

impl FreeNilpotentLie {
    pub fn new(basis: HallBasis) -> Self {
        FreeNilpotentLie {
            basis,
            cache: Some(RwLock::new(HashMap::new())),
        }
    }

    /// No memo table; every bracket is recomputed.
    pub fn uncached(basis: HallBasis) -> Self {
        FreeNilpotentLie { basis, cache: None }
    }

    pub fn basis(&self) -> &HallBasis {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn class(&self) -> usize {
        self.basis.class()
    }

    /// Hall normal form of `[U, V]` for basis indices `u`, `v`.
    pub fn hall_bracket(&self, u: usize, v: usize) -> Result<LieCombination> {
        let degree = self.basis.element(u).degree + self.basis.element(v).degree;
        if degree > self.class() {
            return Err(Error::DegreeOverflow {
                degree,
                class: self.class(),
            });
        }
        Ok(self.bracket_unchecked(u, v))
    }

    /// Bilinear extension of [`Self::hall_bracket`].
    pub fn bracket_combinations(
        &self,
        p: &LieCombination,
        q: &LieCombination,
    ) -> Result<LieCombination> {
        let degree = p.degree() + q.degree();
        if degree > self.class() {
            return Err(Error::DegreeOverflow {
                degree,
                class: self.class(),
            });
        }
        Ok(self.bracket_comb_unchecked(p, q))
    }

    fn bracket_comb_unchecked(&self, p: &LieCombination, q: &LieCombination) -> LieCombination {
        let mut out = LieCombination::zero(p.degree() + q.degree());
        for (a, ca) in p.terms() {
            for (b, cb) in q.terms() {
                if a == b {
                    continue;
                }
                let br = self.bracket_unchecked(a, b);
                out.add_scaled(&br, &(ca * cb));
            }
        }
        out
    }

    fn bracket_unchecked(&self, u: usize, v: usize) -> LieCombination {
        let degree = self.basis.element(u).degree + self.basis.element(v).degree;
        if u == v {
            return LieCombination::zero(degree);
        }
        if u > v {
            return -self.bracket_unchecked(v, u);
        }
        if let Some(cache) = &self.cache {
            if let Some(hit) = cache.read().expect("bracket cache poisoned").get(&(u, v)) {
                return LieCombination::clone(hit);
            }
        }
        let result = self.rewrite(u, v, degree);
        if let Some(cache) = &self.cache {
            cache
                .write()
                .expect("bracket cache poisoned")
                .entry((u, v))
                .or_insert_with(|| Arc::new(result.clone()));
        }
        result
    }

    /// `u < v` assumed.
    fn rewrite(&self, u: usize, v: usize, degree: usize) -> LieCombination {
        if let Some(idx) = self.basis.find_bracket(u, v) {
            return LieCombination::single(degree, idx);
        }
        let (v1, v2) = match self.basis.element(v).kind {
            HallKind::Bracket { left, right } => (left, right),
            // u < v with v a generator forces u to be a smaller generator,
            // and every such pair is a Hall bracket.
            HallKind::Generator(_) => unreachable!("generator pair ({u}, {v}) missing from basis"),
        };
        debug_assert!(v1 > u);
        let deg_v1 = self.basis.element(v1).degree;
        let deg_v2 = self.basis.element(v2).degree;
        // [[U,V1],V2]
        let u_v1 = self.bracket_unchecked(u, v1);
        let first = self.bracket_comb_unchecked(&u_v1, &LieCombination::single(deg_v2, v2));
        // [V1,[U,V2]]
        let u_v2 = self.bracket_unchecked(u, v2);
        let second = self.bracket_comb_unchecked(&LieCombination::single(deg_v1, v1), &u_v2);
        first + second
    }

    /// Image of basis element `x` under the Lie endomorphism extending the
    /// linear map `a` on the generators (column `j` is the image of `X_{j+1}`).
    pub fn apply_endo(&self, a: &IntegerMatrix, x: usize) -> Result<LieCombination> {
        self.check_matrix(a)?;
        Ok(self.image(a, x))
    }

    fn image(&self, a: &IntegerMatrix, x: usize) -> LieCombination {
        match self.basis.element(x).kind {
            HallKind::Generator(j) => self.generator_image(a, j),
            HallKind::Bracket { left, right } => {
                let l = self.image(a, left);
                let r = self.image(a, right);
                self.bracket_comb_unchecked(&l, &r)
            }
        }
    }

    fn generator_image(&self, a: &IntegerMatrix, j: usize) -> LieCombination {
        let mut out = LieCombination::zero(1);
        for k in 0..self.rank() {
            out.add_term(k, a.get(k, j).clone());
        }
        out
    }

    /// Images of every element of degree `<= max_degree`, computed bottom-up
    /// so each bracket reuses the images of its factors.
    pub fn images_up_to(
        &self,
        a: &IntegerMatrix,
        max_degree: usize,
    ) -> Result<Vec<LieCombination>> {
        self.check_matrix(a)?;
        let max_degree = max_degree.min(self.class());
        let end = if max_degree == 0 {
            0
        } else {
            self.basis.layer_range(max_degree).end
        };
        let mut images: Vec<LieCombination> = Vec::with_capacity(end);
        for x in 0..end {
            let img = match self.basis.element(x).kind {
                HallKind::Generator(j) => self.generator_image(a, j),
                HallKind::Bracket { left, right } => {
                    self.bracket_comb_unchecked(&images[left], &images[right])
                }
            };
            images.push(img);
        }
        Ok(images)
    }

    fn check_matrix(&self, a: &IntegerMatrix) -> Result<()> {
        let r = self.rank();
        if a.rows() != r || a.cols() != r {
            return Err(Error::DimensionMismatch {
                expected: format!("{r}x{r}"),
                found: format!("{}x{}", a.rows(), a.cols()),
            });
        }
        Ok(())
    }
}
