//! Words in two letters, the BCH series, and bracket evaluation.
//!
//! The BCH series is computed as `log(exp(a) exp(b))` in the free associative
//! algebra on two letters, then each homogeneous part is rewritten as a
//! combination of right-nested brackets by the Dynkin projection. The bracket
//! form is checked by expanding it back into words; a mismatch means the
//! input was not a Lie element. Bracket combinations can then be evaluated in
//! any Lie algebra through the [`LieAlgebra`] trait.

use crate::coeff::{Coeff, Rational};
use crate::error::Error;
use crate::hopf::concat_commutator;
use crate::series::Series;
use num_traits::{One, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

/// One of the two generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
        }
    }
}

pub type Word = Vec<Letter>;

/// Finite combination of words with rational coefficients.
pub type WordPolynomial = BTreeMap<Word, Rational>;

fn word_add_into(acc: &mut WordPolynomial, w: Word, c: Rational) {
    if c.is_zero() {
        return;
    }
    match acc.entry(w) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

fn word_mul(x: &WordPolynomial, y: &WordPolynomial, order: usize) -> WordPolynomial {
    let mut out = WordPolynomial::new();
    for (u, cu) in x {
        for (v, cv) in y {
            if u.len() + v.len() > order {
                continue;
            }
            let mut w = u.clone();
            w.extend_from_slice(v);
            word_add_into(&mut out, w, cu * cv);
        }
    }
    out
}

fn word_scale(x: &WordPolynomial, c: &Rational) -> WordPolynomial {
    if c.is_zero() {
        return WordPolynomial::new();
    }
    x.iter().map(|(w, v)| (w.clone(), v * c)).collect()
}

fn word_sum(x: &WordPolynomial, y: &WordPolynomial) -> WordPolynomial {
    let mut out = x.clone();
    for (w, c) in y {
        word_add_into(&mut out, w.clone(), c.clone());
    }
    out
}

/// `exp(x)` truncated at word length `order`; `x` must have no constant term.
fn word_exp(x: &WordPolynomial, order: usize) -> WordPolynomial {
    assert!(!x.contains_key(&Word::new()), "exponent has a constant term");
    let mut out = WordPolynomial::new();
    word_add_into(&mut out, Word::new(), Rational::one());
    let mut power = out.clone();
    let mut kfact = Rational::one();
    for k in 1..=order {
        power = word_mul(&power, x, order);
        if power.is_empty() {
            break;
        }
        kfact *= Rational::from_integer(k.into());
        out = word_sum(&out, &word_scale(&power, &kfact.recip()));
    }
    out
}

/// `log(x)` truncated at word length `order`; `x` must have constant term one.
fn word_log(x: &WordPolynomial, order: usize) -> WordPolynomial {
    let one = x.get(&Word::new());
    assert!(
        one.map(|c| c.is_one()).unwrap_or(false),
        "logarithm argument must have constant term one"
    );
    let mut z = x.clone();
    z.remove(&Word::new());
    let mut out = WordPolynomial::new();
    let mut power = WordPolynomial::new();
    word_add_into(&mut power, Word::new(), Rational::one());
    for k in 1..=order {
        power = word_mul(&power, &z, order);
        if power.is_empty() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let c = Rational::new(sign.into(), (k as i64).into());
        out = word_sum(&out, &word_scale(&power, &c));
    }
    out
}

/// `log(exp(a) exp(b))` as a word polynomial through the given length.
pub fn bch_words(order: usize) -> WordPolynomial {
    let mut a = WordPolynomial::new();
    word_add_into(&mut a, vec![Letter::A], Rational::one());
    let mut b = WordPolynomial::new();
    word_add_into(&mut b, vec![Letter::B], Rational::one());
    let prod = word_mul(&word_exp(&a, order), &word_exp(&b, order), order);
    word_log(&prod, order)
}

/// Iterated bracket over the two generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BracketExpr {
    Letter(Letter),
    Bracket(Box<BracketExpr>, Box<BracketExpr>),
}

impl BracketExpr {
    pub fn degree(&self) -> usize {
        match self {
            BracketExpr::Letter(_) => 1,
            BracketExpr::Bracket(l, r) => l.degree() + r.degree(),
        }
    }

    /// Expansion into the free associative algebra.
    pub fn expand(&self) -> WordPolynomial {
        match self {
            BracketExpr::Letter(l) => {
                let mut out = WordPolynomial::new();
                word_add_into(&mut out, vec![*l], Rational::one());
                out
            }
            BracketExpr::Bracket(l, r) => {
                let lw = l.expand();
                let rw = r.expand();
                let n = self.degree();
                let lr = word_mul(&lw, &rw, n);
                let rl = word_mul(&rw, &lw, n);
                let mut out = lr;
                for (w, c) in rl {
                    word_add_into(&mut out, w, -c);
                }
                out
            }
        }
    }

    /// Canonical orientation modulo antisymmetry. Returns the reoriented
    /// expression and whether the sign flipped; `None` when the bracket
    /// vanishes because both sides agree.
    fn normalize(&self) -> Option<(BracketExpr, bool)> {
        match self {
            BracketExpr::Letter(_) => Some((self.clone(), false)),
            BracketExpr::Bracket(l, r) => {
                let (ln, lflip) = l.normalize()?;
                let (rn, rflip) = r.normalize()?;
                match ln.cmp(&rn) {
                    std::cmp::Ordering::Equal => None,
                    std::cmp::Ordering::Less => Some((
                        BracketExpr::Bracket(Box::new(ln), Box::new(rn)),
                        lflip ^ rflip,
                    )),
                    std::cmp::Ordering::Greater => Some((
                        BracketExpr::Bracket(Box::new(rn), Box::new(ln)),
                        !(lflip ^ rflip),
                    )),
                }
            }
        }
    }
}

impl fmt::Display for BracketExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketExpr::Letter(l) => write!(f, "{}", l.char()),
            BracketExpr::Bracket(l, r) => write!(f, "[{},{}]", l, r),
        }
    }
}

/// One summand of a bracket combination.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketTerm {
    pub coeff: Rational,
    pub expr: BracketExpr,
}

/// Merge terms modulo antisymmetry and order them deterministically.
fn normalize_terms(raw: Vec<BracketTerm>) -> Vec<BracketTerm> {
    let mut acc: BTreeMap<BracketExpr, Rational> = BTreeMap::new();
    for term in raw {
        if let Some((expr, flip)) = term.expr.normalize() {
            let c = if flip { -term.coeff } else { term.coeff };
            let entry = acc.entry(expr).or_insert_with(Rational::zero);
            *entry += c;
        }
    }
    acc.retain(|_, c| !c.is_zero());
    acc.into_iter()
        .map(|(expr, coeff)| BracketTerm { coeff, expr })
        .collect()
}

/// Rewrites a homogeneous Lie polynomial as right-nested brackets.
///
/// Each word contributes its right-nested bracketing weighted by `1/degree`.
/// The result is expanded back into words and compared with the input; a
/// difference means the input was not a Lie element.
pub fn dynkin_project(p: &WordPolynomial) -> Result<Vec<BracketTerm>, Error> {
    let mut raw = Vec::new();
    for (word, c) in p {
        let n = word.len();
        assert!(n >= 1, "constant terms have no bracket form");
        let mut expr = BracketExpr::Letter(word[n - 1]);
        for l in word[..n - 1].iter().rev() {
            expr = BracketExpr::Bracket(Box::new(BracketExpr::Letter(*l)), Box::new(expr));
        }
        raw.push(BracketTerm {
            coeff: c / Rational::from_integer((n as i64).into()),
            expr,
        });
    }
    let terms = normalize_terms(raw);
    let mut back = WordPolynomial::new();
    for term in &terms {
        back = word_sum(&back, &word_scale(&term.expr.expand(), &term.coeff));
    }
    if back != *p {
        return Err(Error::NotLieElement);
    }
    Ok(terms)
}

/// The BCH series in bracket form, one component per degree.
#[derive(Debug, Clone, PartialEq)]
pub struct BchTable {
    components: Vec<Vec<BracketTerm>>,
}

impl BchTable {
    pub fn order(&self) -> usize {
        self.components.len()
    }

    /// Degree-`n` component, `1 <= n <= order`.
    pub fn component(&self, n: usize) -> &[BracketTerm] {
        assert!(n >= 1 && n <= self.components.len(), "component {n} out of range");
        &self.components[n - 1]
    }

    pub fn components(&self) -> &[Vec<BracketTerm>] {
        &self.components
    }

    /// Same table with the degree-one part removed.
    pub fn without_linear_part(&self) -> BchTable {
        let mut components = self.components.clone();
        if !components.is_empty() {
            components[0] = Vec::new();
        }
        BchTable { components }
    }

    /// The components up to the given degree.
    pub fn truncate(&self, order: usize) -> BchTable {
        BchTable {
            components: self.components[..order.min(self.components.len())].to_vec(),
        }
    }

    /// Renders one component, e.g. `1/12 [a,[a,b]] - 1/12 [b,[a,b]]`.
    pub fn component_text(&self, n: usize) -> String {
        let terms = self.component(n);
        if terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, term) in terms.iter().enumerate() {
            let negative = term.coeff < Rational::zero();
            let magnitude = if negative { -&term.coeff } else { term.coeff.clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if !magnitude.is_one() {
                out.push_str(&magnitude.to_string());
                out.push(' ');
            }
            out.push_str(&term.expr.to_string());
        }
        out
    }
}

/// Bracket form of `log(exp(a) exp(b))` through the given degree.
pub fn bch_table(order: usize) -> BchTable {
    let words = bch_words(order);
    let mut components = Vec::with_capacity(order);
    for n in 1..=order {
        let part: WordPolynomial = words
            .iter()
            .filter(|(w, _)| w.len() == n)
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        let terms = dynkin_project(&part)
            .expect("the BCH series is a Lie series in every degree");
        components.push(terms);
    }
    BchTable { components }
}

/// Minimal interface for evaluating bracket combinations.
pub trait LieAlgebra {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: &Rational, x: &Self::Elem) -> Self::Elem;
    fn bracket(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
}

fn eval_expr<L: LieAlgebra>(expr: &BracketExpr, alg: &L, a: &L::Elem, b: &L::Elem) -> L::Elem {
    match expr {
        BracketExpr::Letter(Letter::A) => a.clone(),
        BracketExpr::Letter(Letter::B) => b.clone(),
        BracketExpr::Bracket(l, r) => {
            let lv = eval_expr(l, alg, a, b);
            let rv = eval_expr(r, alg, a, b);
            alg.bracket(&lv, &rv)
        }
    }
}

/// Value of a bracket combination at `a` and `b`.
pub fn evaluate<L: LieAlgebra>(
    terms: &[BracketTerm],
    alg: &L,
    a: &L::Elem,
    b: &L::Elem,
) -> L::Elem {
    let mut acc = alg.zero();
    for term in terms {
        let v = eval_expr(&term.expr, alg, a, b);
        acc = alg.add(&acc, &alg.scale(&term.coeff, &v));
    }
    acc
}

fn eval_cached<L: LieAlgebra>(
    expr: &BracketExpr,
    alg: &L,
    a: &L::Elem,
    b: &L::Elem,
    cache: &mut std::collections::HashMap<BracketExpr, L::Elem>,
) -> L::Elem {
    if let Some(hit) = cache.get(expr) {
        return hit.clone();
    }
    let value = match expr {
        BracketExpr::Letter(Letter::A) => a.clone(),
        BracketExpr::Letter(Letter::B) => b.clone(),
        BracketExpr::Bracket(l, r) => {
            let lv = eval_cached(l, alg, a, b, cache);
            let rv = eval_cached(r, alg, a, b, cache);
            alg.bracket(&lv, &rv)
        }
    };
    cache.insert(expr.clone(), value.clone());
    value
}

/// Value of the whole table at `a` and `b`, all degrees summed.
///
/// Sub-brackets are shared across terms, so repeated tails of the nested
/// expressions are computed once.
pub fn evaluate_table<L: LieAlgebra>(table: &BchTable, alg: &L, a: &L::Elem, b: &L::Elem) -> L::Elem {
    let mut cache = std::collections::HashMap::new();
    let mut acc = alg.zero();
    for n in 1..=table.order() {
        for term in table.component(n) {
            let v = eval_cached(&term.expr, alg, a, b, &mut cache);
            acc = alg.add(&acc, &alg.scale(&term.coeff, &v));
        }
    }
    acc
}

/// Forest series under the concatenation commutator.
pub struct ForestCommutator<C: Coeff> {
    pub order: usize,
    marker: PhantomData<C>,
}

impl<C: Coeff> ForestCommutator<C> {
    pub fn new(order: usize) -> Self {
        ForestCommutator { order, marker: PhantomData }
    }
}

impl<C: Coeff> LieAlgebra for ForestCommutator<C> {
    type Elem = Series<C>;

    fn zero(&self) -> Series<C> {
        Series::zero(self.order)
    }

    fn add(&self, x: &Series<C>, y: &Series<C>) -> Series<C> {
        x + y
    }

    fn scale(&self, c: &Rational, x: &Series<C>) -> Series<C> {
        x.scale_rational(c)
    }

    fn bracket(&self, x: &Series<C>, y: &Series<C>) -> Series<C> {
        concat_commutator(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::hopf::{exp_concat, log_concat};
    use crate::tree::Tree;

    fn letters(s: &str) -> Word {
        s.chars()
            .map(|c| match c {
                'a' => Letter::A,
                'b' => Letter::B,
                _ => panic!("unexpected letter {c}"),
            })
            .collect()
    }

    fn bracket(l: BracketExpr, r: BracketExpr) -> BracketExpr {
        BracketExpr::Bracket(Box::new(l), Box::new(r))
    }

    const A: BracketExpr = BracketExpr::Letter(Letter::A);
    const B: BracketExpr = BracketExpr::Letter(Letter::B);

    #[test]
    fn low_degree_components_match_the_textbook_series() {
        let table = bch_table(4);
        let expand_component = |n: usize| {
            let mut out = WordPolynomial::new();
            for term in table.component(n) {
                out = word_sum(&out, &word_scale(&term.expr.expand(), &term.coeff));
            }
            out
        };
        let mut deg1 = WordPolynomial::new();
        word_add_into(&mut deg1, letters("a"), rat(1, 1));
        word_add_into(&mut deg1, letters("b"), rat(1, 1));
        assert_eq!(expand_component(1), deg1);

        let half_ab = word_scale(&bracket(A, B).expand(), &rat(1, 2));
        assert_eq!(expand_component(2), half_ab);

        let deg3 = word_sum(
            &word_scale(&bracket(A, bracket(A, B)).expand(), &rat(1, 12)),
            &word_scale(&bracket(B, bracket(A, B)).expand(), &rat(-1, 12)),
        );
        assert_eq!(expand_component(3), deg3);

        let deg4 = word_scale(&bracket(B, bracket(A, bracket(A, B))).expand(), &rat(-1, 24));
        assert_eq!(expand_component(4), deg4);
    }

    #[test]
    fn component_text_is_stable() {
        let table = bch_table(3);
        assert_eq!(table.component_text(1), "a + b");
        assert_eq!(table.component_text(2), "1/2 [a,b]");
        assert_eq!(table.component_text(3), "1/12 [a,[a,b]] - 1/12 [b,[a,b]]");
        assert_eq!(table.without_linear_part().component_text(1), "0");
    }

    #[test]
    fn setting_b_to_zero_collapses_to_a() {
        let words = bch_words(6);
        for n in 1..=6usize {
            let mut sum = WordPolynomial::new();
            for (w, c) in &words {
                if w.len() == n && !w.contains(&Letter::B) {
                    word_add_into(&mut sum, w.clone(), c.clone());
                }
            }
            if n == 1 {
                let mut expect = WordPolynomial::new();
                word_add_into(&mut expect, letters("a"), rat(1, 1));
                assert_eq!(sum, expect);
            } else {
                assert!(sum.is_empty(), "degree {n}");
            }
        }
    }

    #[test]
    fn setting_b_to_minus_a_cancels_every_degree() {
        let words = bch_words(6);
        for n in 1..=6usize {
            let mut total = Rational::zero();
            for (w, c) in &words {
                if w.len() != n {
                    continue;
                }
                let bs = w.iter().filter(|l| **l == Letter::B).count();
                let sign = if bs % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
                total += c * sign;
            }
            assert!(total.is_zero(), "degree {n}");
        }
    }

    #[test]
    fn dynkin_rejects_non_lie_input() {
        let mut p = WordPolynomial::new();
        word_add_into(&mut p, letters("ab"), rat(1, 1));
        assert!(matches!(dynkin_project(&p), Err(Error::NotLieElement)));
    }

    #[test]
    fn normalization_uses_antisymmetry() {
        let raw = vec![
            BracketTerm { coeff: rat(1, 3), expr: bracket(B, A) },
            BracketTerm { coeff: rat(1, 6), expr: bracket(A, B) },
            BracketTerm { coeff: rat(1, 1), expr: bracket(A, A) },
        ];
        let terms = normalize_terms(raw);
        assert_eq!(
            terms,
            vec![BracketTerm { coeff: rat(-1, 6), expr: bracket(A, B) }]
        );
    }

    #[test]
    fn forest_evaluation_agrees_with_the_associative_logarithm() {
        let order = 4;
        let table = bch_table(order);
        let alg = ForestCommutator::<Rational>::new(order);
        let x = Series::<Rational>::generator(order);
        let y = Series::from_tree(order, Tree::parse("o(o)").unwrap());
        let direct = evaluate_table(&table, &alg, &x, &y);
        let assoc = log_concat(
            &exp_concat(&x).unwrap().concat_mul(&exp_concat(&y).unwrap()),
        )
        .unwrap();
        assert_eq!(direct, assoc);
    }
}
