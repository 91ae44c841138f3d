//! Truncated formal series with forest basis.
//!
//! A [`Series`] maps forests to coefficients and carries a truncation order;
//! terms whose degree exceeds the order are dropped on insertion. The basis
//! iterates in canonical order, so all renderings are deterministic.

use crate::coeff::{Coeff, Rational};
use crate::tree::{Forest, Tree};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Formal linear combination of forests, truncated beyond `order`.
///
/// Equality compares terms only; the truncation order is bookkeeping and two
/// series built at different orders compare equal when their terms agree.
#[derive(Clone, Debug)]
pub struct Series<C: Coeff> {
    order: usize,
    terms: BTreeMap<Forest, C>,
}

impl<C: Coeff> Series<C> {
    pub fn zero(order: usize) -> Self {
        Series { order, terms: BTreeMap::new() }
    }

    /// The series `1` (the empty forest with coefficient one).
    pub fn one(order: usize) -> Self {
        let mut s = Series::zero(order);
        s.add_term(Forest::unit(), C::one());
        s
    }

    /// The single undecorated vertex.
    pub fn generator(order: usize) -> Self {
        Series::from_forest(order, Forest::single(Tree::dot()))
    }

    pub fn from_forest(order: usize, forest: Forest) -> Self {
        let mut s = Series::zero(order);
        s.add_term(forest, C::one());
        s
    }

    pub fn from_tree(order: usize, tree: Tree) -> Self {
        Series::from_forest(order, Forest::single(tree))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Adds `c * forest`, merging and dropping zeros; terms beyond the
    /// truncation order are discarded.
    pub fn add_term(&mut self, forest: Forest, c: C) {
        if c.is_zero() || forest.degree() > self.order {
            return;
        }
        match self.terms.entry(forest) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Forest, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, forest: &Forest) -> C {
        self.terms.get(forest).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficient of the empty forest.
    pub fn counit(&self) -> C {
        self.coeff(&Forest::unit())
    }

    /// Copy truncated to a (usually lower) order.
    pub fn truncated(&self, order: usize) -> Series<C> {
        let mut s = Series::zero(order);
        for (f, c) in &self.terms {
            s.add_term(f.clone(), c.clone());
        }
        s
    }

    /// Terms of exact degree `n`, kept at the same truncation order.
    pub fn homogeneous(&self, n: usize) -> Series<C> {
        let mut s = Series::zero(self.order);
        for (f, c) in &self.terms {
            if f.degree() == n {
                s.add_term(f.clone(), c.clone());
            }
        }
        s
    }

    /// Largest degree with a nonzero term.
    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Forest::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &C) -> Series<C> {
        let mut s = Series::zero(self.order);
        for (f, k) in &self.terms {
            s.add_term(f.clone(), k.clone() * c.clone());
        }
        s
    }

    pub fn scale_rational(&self, r: &Rational) -> Series<C> {
        self.scale(&C::from_rational(r.clone()))
    }

    /// Concatenation product; truncates at the smaller operand order.
    pub fn concat_mul(&self, other: &Series<C>) -> Series<C> {
        let order = self.order.min(other.order);
        let mut s = Series::zero(order);
        for (f, a) in &self.terms {
            if f.degree() > order {
                continue;
            }
            for (g, b) in &other.terms {
                if f.degree() + g.degree() > order {
                    break;
                }
                s.add_term(f.concat(g), a.clone() * b.clone());
            }
        }
        s
    }

    /// Applies a coefficient map, dropping zeros; used for weight
    /// substitution.
    pub fn map_coeff<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Series<D> {
        let mut s = Series::zero(self.order);
        for (forest, c) in &self.terms {
            s.add_term(forest.clone(), f(c));
        }
        s
    }

    /// Plain-text rendering: `coeff * forest` terms joined by ` + `.
    pub fn text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(f, c)| format!("{} * {}", c.text(), f.serialize()))
            .collect();
        rendered.join(" + ")
    }

    /// JSON rendering: `{"order": N, "terms": [{"coeff": .., "forest": ..}]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(f, c)| json!({ "coeff": c.json(), "forest": f.serialize() }))
            .collect();
        json!({ "order": self.order, "terms": terms })
    }
}

impl Series<Rational> {
    /// Reinterprets rational coefficients in any other coefficient ring.
    pub fn into_coeff<C: Coeff>(&self) -> Series<C> {
        self.map_coeff(|c| C::from_rational(c.clone()))
    }
}

impl<C: Coeff> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<C: Coeff> Eq for Series<C> {}

impl<C: Coeff> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.text())
    }
}

impl<C: Coeff> Add for &Series<C> {
    type Output = Series<C>;
    fn add(self, rhs: &Series<C>) -> Series<C> {
        let mut s = Series::zero(self.order.max(rhs.order));
        for (f, c) in self.terms.iter().chain(rhs.terms.iter()) {
            s.add_term(f.clone(), c.clone());
        }
        s
    }
}

impl<C: Coeff> Sub for &Series<C> {
    type Output = Series<C>;
    fn sub(self, rhs: &Series<C>) -> Series<C> {
        let mut s = Series::zero(self.order.max(rhs.order));
        for (f, c) in &self.terms {
            s.add_term(f.clone(), c.clone());
        }
        for (f, c) in &rhs.terms {
            s.add_term(f.clone(), c.clone().neg());
        }
        s
    }
}

impl<C: Coeff> Neg for &Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        let mut s = Series::zero(self.order);
        for (f, c) in &self.terms {
            s.add_term(f.clone(), c.clone().neg());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, Laurent};

    fn f(s: &str) -> Forest {
        Forest::parse(s).unwrap()
    }

    fn series(order: usize, terms: &[(&str, Rational)]) -> Series<Rational> {
        let mut s = Series::zero(order);
        for (forest, c) in terms {
            s.add_term(f(forest), c.clone());
        }
        s
    }

    #[test]
    fn add_term_merges_and_cancels() {
        let mut s: Series<Rational> = Series::zero(4);
        s.add_term(f("o o"), rat(1, 2));
        s.add_term(f("o o"), rat(1, 2));
        assert_eq!(s.coeff(&f("o o")), rat(1, 1));
        s.add_term(f("o o"), rat(-1, 1));
        assert!(s.is_zero());
        // Beyond the truncation order nothing is stored.
        s.add_term(f("o o o o o"), rat(1, 1));
        assert!(s.is_zero());
    }

    #[test]
    fn concat_mul_truncates_at_smaller_order() {
        let x = series(3, &[("o", rat(1, 1)), ("o o", rat(1, 1))]);
        let y = series(2, &[("o(o)", rat(2, 1))]);
        let p = x.concat_mul(&y);
        assert_eq!(p.order(), 2);
        assert!(p.is_zero());
        let q = series(5, &[("o", rat(3, 1))]).concat_mul(&series(5, &[("o(o)", rat(2, 1))]));
        assert_eq!(q, series(5, &[("o o(o)", rat(6, 1))]));
    }

    #[test]
    fn concat_is_noncommutative() {
        let a = series(4, &[("o", rat(1, 1))]);
        let b = series(4, &[("o(o)", rat(1, 1))]);
        assert_eq!(a.concat_mul(&b), series(4, &[("o o(o)", rat(1, 1))]));
        assert_eq!(b.concat_mul(&a), series(4, &[("o(o) o", rat(1, 1))]));
    }

    #[test]
    fn counit_reads_the_empty_forest() {
        let mut s: Series<Rational> = Series::one(3);
        assert_eq!(s.counit(), rat(1, 1));
        s.add_term(f("o"), rat(7, 1));
        assert_eq!(s.counit(), rat(1, 1));
        assert_eq!(Series::<Rational>::generator(3).counit(), rat(0, 1));
    }

    #[test]
    fn homogeneous_picks_one_degree() {
        let s = series(4, &[("o", rat(1, 1)), ("o o", rat(2, 1)), ("o(o)", rat(3, 1))]);
        assert_eq!(s.homogeneous(2), series(4, &[("o o", rat(2, 1)), ("o(o)", rat(3, 1))]));
        assert_eq!(s.homogeneous(3), Series::zero(4));
        assert_eq!(s.max_degree(), 2);
    }

    #[test]
    fn text_format_is_canonical_and_explicit() {
        let s = series(3, &[("o(o)", rat(-1, 2)), ("o", rat(1, 1))]);
        assert_eq!(s.text(), "1 * o + -1/2 * o(o)");
        assert_eq!(Series::<Rational>::zero(2).text(), "0");
    }

    #[test]
    fn json_matches_the_schema() {
        let s = series(2, &[("o(o)", rat(-1, 2))]);
        assert_eq!(
            s.to_json(),
            serde_json::json!({
                "order": 2,
                "terms": [{ "coeff": { "num": -1, "den": 2 }, "forest": "o(o)" }]
            })
        );
        let l: Series<Laurent> = s.into_coeff();
        assert_eq!(
            l.to_json(),
            serde_json::json!({
                "order": 2,
                "terms": [{ "coeff": [[0, -1, 2]], "forest": "o(o)" }]
            })
        );
    }

    #[test]
    fn equality_ignores_truncation_order() {
        let a = series(3, &[("o", rat(1, 1))]);
        let b = series(7, &[("o", rat(1, 1))]);
        assert_eq!(a, b);
    }
}
