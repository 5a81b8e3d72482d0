//! Hall basis of the free Lie algebra on `r` generators, truncated at degree `c`.
//!
//! Elements live in one arena indexed by their position in the total order.
//! Degree 1 holds the generators `X1 < X2 < ... < Xr`; a bracket `[U, V]` of
//! degree `n` is admitted when `U < V` and, if `V = [V1, V2]`, also `V1 <= U`.
//! Shorter elements always precede longer ones. Inside one degree the order is
//! fixed by a [`TieBreak`] rule on the pair `(index(U), index(V))`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::{Mul, Range};

use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// How brackets of equal degree are ordered among themselves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum TieBreak {
    /// Ascending in `(index(U), index(V))`.
    #[default]
    Lexicographic,
    /// Descending in `(index(U), index(V))`.
    ReverseLexicographic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HallKind {
    /// Generator `X_{k+1}` (stored zero-based).
    Generator(usize),
    /// `[left, right]`, both given as arena indices.
    Bracket { left: usize, right: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallElement {
    pub kind: HallKind,
    pub degree: usize,
    pub multidegree: Vec<u32>,
    pub order_index: usize,
}

impl HallElement {
    pub fn is_generator(&self) -> bool {
        matches!(self.kind, HallKind::Generator(_))
    }
}

#[derive(Clone, Debug)]
pub struct HallBasis {
    rank: usize,
    class: usize,
    tie_break: TieBreak,
    elements: Vec<HallElement>,
    /// `layer_starts[i - 1]..layer_starts[i]` is the index range of degree `i`.
    layer_starts: Vec<usize>,
    lookup: HashMap<(usize, usize), usize>,
}

impl HallBasis {
    /// Builds the basis of `g_{r,c}` with the default lexicographic tie-break.
    pub fn new(rank: usize, class: usize) -> Result<Self> {
        Self::with_tie_break(rank, class, TieBreak::Lexicographic)
    }

    pub fn with_tie_break(rank: usize, class: usize, tie_break: TieBreak) -> Result<Self> {
        if rank < 2 {
            return Err(Error::domain(format!(
                "rank must be at least 2, got {rank}"
            )));
        }
        if class < 1 {
            return Err(Error::domain("class must be at least 1"));
        }
        Ok(Self::build(rank, class, tie_break))
    }

    /// Same construction without the `rank >= 2` gate. Rank one gives the
    /// abelian algebra on one generator, which the engine uses for 1x1 inputs.
    pub(crate) fn build(rank: usize, class: usize, tie_break: TieBreak) -> Self {
        let mut elements: Vec<HallElement> = (0..rank)
            .map(|k| {
                let mut multidegree = vec![0u32; rank];
                multidegree[k] = 1;
                HallElement {
                    kind: HallKind::Generator(k),
                    degree: 1,
                    multidegree,
                    order_index: k,
                }
            })
            .collect();
        let mut layer_starts = vec![0, rank];
        let mut lookup = HashMap::new();

        for n in 2..=class {
            let mut pairs = Vec::new();
            for k in 1..=n / 2 {
                let l = n - k;
                for u in layer_starts[k - 1]..layer_starts[k] {
                    for v in layer_starts[l - 1]..layer_starts[l] {
                        if u >= v {
                            continue;
                        }
                        if let HallKind::Bracket { left, .. } = elements[v].kind {
                            if left > u {
                                continue;
                            }
                        }
                        pairs.push((u, v));
                    }
                }
            }
            pairs.sort_unstable();
            if tie_break == TieBreak::ReverseLexicographic {
                pairs.reverse();
            }
            for (u, v) in pairs {
                let order_index = elements.len();
                let multidegree = elements[u]
                    .multidegree
                    .iter()
                    .zip(&elements[v].multidegree)
                    .map(|(a, b)| a + b)
                    .collect();
                elements.push(HallElement {
                    kind: HallKind::Bracket { left: u, right: v },
                    degree: n,
                    multidegree,
                    order_index,
                });
                lookup.insert((u, v), order_index);
            }
            layer_starts.push(elements.len());
        }

        HallBasis {
            rank,
            class,
            tie_break,
            elements,
            layer_starts,
            lookup,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[HallElement] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> &HallElement {
        &self.elements[index]
    }

    /// Arena index range of the degree-`degree` layer.
    pub fn layer_range(&self, degree: usize) -> Range<usize> {
        assert!(
            (1..=self.class).contains(&degree),
            "degree {degree} outside 1..={}",
            self.class
        );
        self.layer_starts[degree - 1]..self.layer_starts[degree]
    }

    pub fn layer(&self, degree: usize) -> &[HallElement] {
        &self.elements[self.layer_range(degree)]
    }

    pub fn layer_dims(&self) -> Vec<usize> {
        (1..=self.class)
            .map(|i| self.layer_range(i).len())
            .collect()
    }

    /// Index of the basis element `[u, v]`, if that pair is a Hall bracket.
    pub fn find_bracket(&self, u: usize, v: usize) -> Option<usize> {
        self.lookup.get(&(u, v)).copied()
    }

    /// Position of an element inside its own layer.
    pub fn position_in_layer(&self, index: usize) -> usize {
        let degree = self.elements[index].degree;
        index - self.layer_starts[degree - 1]
    }

    pub fn label(&self, index: usize) -> String {
        let mut out = String::new();
        self.write_label(index, &mut out);
        out
    }

    fn write_label(&self, index: usize, out: &mut String) {
        match self.elements[index].kind {
            HallKind::Generator(k) => {
                let _ = write!(out, "X{}", k + 1);
            }
            HallKind::Bracket { left, right } => {
                out.push('[');
                self.write_label(left, out);
                out.push(',');
                self.write_label(right, out);
                out.push(']');
            }
        }
    }

    /// `f_λ(X)` via the stored multidegree: `Π_k λ_k^{m_k}`.
    pub fn monomial<T>(&self, index: usize, lambda: &[T]) -> T
    where
        T: Clone + One + Mul<Output = T>,
    {
        assert_eq!(lambda.len(), self.rank, "one value per generator");
        self.elements[index]
            .multidegree
            .iter()
            .zip(lambda)
            .fold(T::one(), |acc, (&m, l)| {
                acc * num_traits::pow(l.clone(), m as usize)
            })
    }

    /// `f_λ(X)` by structural recursion: `f_λ([U,V]) = f_λ(U) f_λ(V)`.
    pub fn monomial_recursive<T>(&self, index: usize, lambda: &[T]) -> T
    where
        T: Clone + One + Mul<Output = T>,
    {
        match self.elements[index].kind {
            HallKind::Generator(k) => lambda[k].clone(),
            HallKind::Bracket { left, right } => {
                self.monomial_recursive(left, lambda) * self.monomial_recursive(right, lambda)
            }
        }
    }

    /// Array of layers, one object per degree.
    pub fn to_json(&self) -> Value {
        let layers: Vec<Value> = (1..=self.class)
            .map(|degree| {
                let elements: Vec<Value> = self
                    .layer_range(degree)
                    .map(|idx| {
                        let e = &self.elements[idx];
                        let (left, right) = match e.kind {
                            HallKind::Generator(_) => (Value::Null, Value::Null),
                            HallKind::Bracket { left, right } => (json!(left), json!(right)),
                        };
                        json!({
                            "index": idx,
                            "label": self.label(idx),
                            "multidegree": e.multidegree,
                            "left": left,
                            "right": right,
                        })
                    })
                    .collect();
                json!({
                    "degree": degree,
                    "witt": witt_dimension(self.rank as u64, degree as u32).ok(),
                    "size": elements.len(),
                    "elements": elements,
                })
            })
            .collect();
        Value::Array(layers)
    }
}

/// Convenience wrapper matching the free-function style used by the CLI.
pub fn build_hall_basis(rank: usize, class: usize) -> Result<HallBasis> {
    HallBasis::new(rank, class)
}

/// Möbius function.
pub fn mobius(mut n: u64) -> i64 {
    assert!(n >= 1);
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Witt's formula for the dimension of the degree-`i` piece of the free Lie
/// algebra on `r` generators.
pub fn witt_dimension(r: u64, i: u32) -> Result<u64> {
    if r < 1 || i < 1 {
        return Err(Error::domain(format!(
            "witt_dimension needs r >= 1, i >= 1, got ({r}, {i})"
        )));
    }
    let overflow = || Error::domain(format!("witt_dimension({r}, {i}) overflows"));
    let mut sum: i128 = 0;
    for d in 1..=i {
        if !i.is_multiple_of(d) {
            continue;
        }
        let mu = mobius(d as u64) as i128;
        if mu == 0 {
            continue;
        }
        let power = (r as i128).checked_pow(i / d).ok_or_else(overflow)?;
        sum = sum.checked_add(mu * power).ok_or_else(overflow)?;
    }
    debug_assert_eq!(sum % i as i128, 0);
    u64::try_from(sum / i as i128).map_err(|_| overflow())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(basis: &HallBasis, degree: usize) -> Vec<String> {
        basis.layer_range(degree).map(|i| basis.label(i)).collect()
    }

    #[test]
    fn rank_two_class_two() {
        let b = HallBasis::new(2, 2).unwrap();
        assert_eq!(labels(&b, 1), ["X1", "X2"]);
        assert_eq!(labels(&b, 2), ["[X1,X2]"]);
    }

    #[test]
    fn rank_two_class_three() {
        let b = HallBasis::new(2, 3).unwrap();
        assert_eq!(labels(&b, 3), ["[X1,[X1,X2]]", "[X2,[X1,X2]]"]);
    }

    #[test]
    fn rank_three_class_two() {
        let b = HallBasis::new(3, 2).unwrap();
        assert_eq!(labels(&b, 2), ["[X1,X2]", "[X1,X3]", "[X2,X3]"]);
    }

    #[test]
    fn degree_three_shape() {
        // [X_i,[X_j,X_k]] with j < k and j <= i.
        let r = 4;
        let b = HallBasis::new(r, 3).unwrap();
        let mut expected = Vec::new();
        for i in 1..=r {
            for j in 1..=r {
                for k in j + 1..=r {
                    if j <= i {
                        expected.push(format!("[X{i},[X{j},X{k}]]"));
                    }
                }
            }
        }
        let mut got = labels(&b, 3);
        got.sort();
        expected.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn rank_two_class_six_layer_sizes() {
        let b = HallBasis::new(2, 6).unwrap();
        assert_eq!(b.layer_dims(), [2, 1, 2, 3, 6, 9]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(HallBasis::new(1, 3), Err(Error::Domain(_))));
        assert!(matches!(HallBasis::new(2, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn witt_values() {
        assert_eq!(witt_dimension(2, 2).unwrap(), 1);
        assert_eq!(witt_dimension(2, 3).unwrap(), 2);
        assert_eq!(witt_dimension(4, 2).unwrap(), 6);
        assert_eq!(witt_dimension(1, 1).unwrap(), 1);
        assert_eq!(witt_dimension(1, 5).unwrap(), 0);
        assert!(witt_dimension(0, 2).is_err());
    }

    #[test]
    fn witt_matches_pair_count() {
        for r in 2..8u64 {
            let pairs = (1..=r)
                .flat_map(|i| (i + 1..=r).map(move |j| (i, j)))
                .count() as u64;
            assert_eq!(witt_dimension(r, 2).unwrap(), pairs);
        }
    }

    #[test]
    fn mobius_small() {
        let got: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(got, [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn hall_conditions_hold() {
        for tb in [TieBreak::Lexicographic, TieBreak::ReverseLexicographic] {
            let b = HallBasis::with_tie_break(3, 5, tb).unwrap();
            for (idx, e) in b.elements().iter().enumerate() {
                assert_eq!(e.order_index, idx);
                assert_eq!(e.multidegree.iter().sum::<u32>() as usize, e.degree);
                if let HallKind::Bracket { left, right } = e.kind {
                    assert!(left < right);
                    if let HallKind::Bracket { left: v1, .. } = b.element(right).kind {
                        assert!(v1 <= left);
                    }
                    let sum: Vec<u32> = b
                        .element(left)
                        .multidegree
                        .iter()
                        .zip(&b.element(right).multidegree)
                        .map(|(a, c)| a + c)
                        .collect();
                    assert_eq!(sum, e.multidegree);
                }
            }
        }
    }

    #[test]
    fn monomials() {
        let b = HallBasis::new(3, 3).unwrap();
        let lambda = [2i64, 3, 5];
        let x12 = b.find_bracket(0, 1).unwrap();
        assert_eq!(b.monomial(x12, &lambda), 6);
        let x2_13 = b.find_bracket(1, b.find_bracket(0, 2).unwrap()).unwrap();
        assert_eq!(b.monomial(x2_13, &lambda), 30);
        for idx in 0..b.len() {
            assert_eq!(b.monomial(idx, &[1i64, 1, 1]), 1);
            assert_eq!(b.monomial(idx, &lambda), b.monomial_recursive(idx, &lambda));
        }
    }

    #[test]
    fn json_layers() {
        let b = HallBasis::new(2, 3).unwrap();
        let v = b.to_json();
        assert_eq!(v.as_array().unwrap().len(), 3);
        assert_eq!(v[1]["elements"][0]["label"], "[X1,X2]");
        assert_eq!(v[2]["witt"], 2);
    }
}
