//! The post-Lie Magnus expansion and its inverse.
//!
//! Both maps are bijections between the primitive elements for the two group
//! structures on the completed algebra: `chi` satisfies
//! `exp_gl(chi(f)) = exp_concat(f)` and its inverse `theta` satisfies
//! `exp_concat(theta(f)) = exp_gl(f)`, where `f` is the single undecorated
//! vertex. Each map is computed twice, once by its degree-wise recursion and
//! once through the logarithm route, and the two results are required to
//! agree.

use crate::coeff::{Coeff, Rational};
use crate::error::Error;
use crate::hopf::{concat_commutator, exp_concat, exp_gl, gl_product, graft, log_concat, log_gl};
use crate::report::Report;
use crate::series::Series;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Graded expansion: component `n` collects the degree-`n` part of the map
/// applied to the generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion<C: Coeff> {
    components: Vec<Series<C>>,
}

impl<C: Coeff> Expansion<C> {
    pub fn new(components: Vec<Series<C>>) -> Self {
        Expansion { components }
    }

    /// Highest degree carried by the expansion.
    pub fn order(&self) -> usize {
        self.components.len()
    }

    /// Degree-`n` component, `1 <= n <= order`.
    pub fn component(&self, n: usize) -> &Series<C> {
        assert!(n >= 1 && n <= self.components.len(), "component {n} out of range");
        &self.components[n - 1]
    }

    pub fn components(&self) -> &[Series<C>] {
        &self.components
    }

    /// Sum of all components, truncated at the expansion order.
    pub fn total(&self) -> Series<C> {
        let order = self.order();
        self.components
            .iter()
            .fold(Series::zero(order), |acc, c| &acc + &c.truncated(order))
    }

    pub fn map_coeff<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Expansion<D> {
        Expansion {
            components: self.components.iter().map(|s| s.map_coeff(&mut f)).collect(),
        }
    }
}

fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

fn inv_factorial(n: usize) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

/// Bernoulli number `B_n` with `B_1 = -1/2`, from the defining recurrence.
pub fn bernoulli(n: usize) -> Rational {
    let mut table: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            table.push(Rational::one());
            continue;
        }
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut sum = Rational::zero();
        let mut binom = BigInt::one();
        for (j, b) in table.iter().enumerate() {
            if j > 0 {
                binom = binom * BigInt::from((m + 2 - j) as u64) / BigInt::from(j as u64);
            }
            sum += b * Rational::from_integer(binom.clone());
        }
        table.push(-sum / Rational::from_integer(BigInt::from(m as u64 + 1)));
    }
    table.pop().unwrap()
}

/// `(-1)^n B_n`: flips the sign of `B_1` and fixes everything else.
fn bernoulli_plus(n: usize) -> Rational {
    if n % 2 == 1 && n > 1 {
        Rational::zero()
    } else if n == 1 {
        Rational::new(BigInt::one(), BigInt::from(2))
    } else {
        bernoulli(n)
    }
}

/// Ordered tuples of positive integers with the given sum and length.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return if total >= 1 { vec![vec![total]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            let mut comp = Vec::with_capacity(parts);
            comp.push(first);
            comp.append(&mut rest);
            out.push(comp);
        }
    }
    out
}

/// Expansion `chi` of the generator, with `exp_gl(chi) = exp_concat(f)`.
///
/// Degree `n` is produced by the recursion
/// `chi_n = f^n/n! - sum_{k=2}^{n} 1/k! sum_{p_1+...+p_k=n} chi_{p_1} * ... * chi_{p_k}`
/// with `*` the Grossman-Larson product, then cross-checked against
/// `log_gl(exp_concat(f))`.
pub fn postlie_magnus(order: usize) -> Expansion<Rational> {
    assert!(order >= 1, "expansion needs order >= 1");
    let gen = Series::<Rational>::generator(order);
    let mut comps: Vec<Series<Rational>> = Vec::with_capacity(order);
    let mut power = Series::<Rational>::one(order);
    for n in 1..=order {
        power = power.concat_mul(&gen);
        let mut comp = power.scale_rational(&inv_factorial(n));
        for k in 2..=n {
            let weight = -inv_factorial(k);
            for parts in compositions(n, k) {
                let mut prod = comps[parts[0] - 1].clone();
                for p in &parts[1..] {
                    prod = gl_product(&prod, &comps[p - 1]);
                }
                comp = &comp + &prod.scale_rational(&weight);
            }
        }
        comps.push(comp);
    }
    let via_log = log_gl(&exp_concat(&gen).unwrap()).unwrap();
    for (n, comp) in comps.iter().enumerate() {
        assert_eq!(
            *comp,
            via_log.homogeneous(n + 1),
            "recursion and logarithm route disagree in degree {}",
            n + 1
        );
    }
    Expansion::new(comps)
}

/// Expansion `theta` of the generator, with `exp_concat(theta) = exp_gl(f)`.
///
/// Degree `n` comes from the fixed-point shape of the inverse map: words in
/// lower components act on `f` by grafting, Bernoulli-weighted commutator
/// chains act on `f` and on the grafting sums, and the total is divided by
/// `n`. Inside the chains the weights are `(-1)^j B_j`. The result is
/// cross-checked against `log_concat(exp_gl(f))`.
pub fn inverse_postlie_magnus(order: usize) -> Expansion<Rational> {
    assert!(order >= 1, "expansion needs order >= 1");
    let gen = Series::<Rational>::generator(order);
    let mut comps: Vec<Series<Rational>> = vec![gen.clone()];
    for n in 2..=order {
        let mut sum = Series::<Rational>::zero(order);
        // Words of total degree n-1 grafted onto the generator.
        for j in 1..=(n - 1) {
            let weight = inv_factorial(j);
            for parts in compositions(n - 1, j) {
                let mut word = comps[parts[0] - 1].clone();
                for p in &parts[1..] {
                    word = word.concat_mul(&comps[p - 1]);
                }
                sum = &sum + &graft(&word, &gen).scale_rational(&weight);
            }
        }
        // Commutator chains of total degree n-1 applied to the generator.
        for j in 1..=(n - 1) {
            let b = bernoulli_plus(j);
            if b.is_zero() {
                continue;
            }
            let weight = b * inv_factorial(j);
            for parts in compositions(n - 1, j) {
                let mut acc = gen.clone();
                for p in parts.iter().rev() {
                    acc = concat_commutator(&comps[p - 1], &acc);
                }
                sum = &sum + &acc.scale_rational(&weight);
            }
        }
        // Chains of degree j-1 applied to grafting sums of degree n-j+1.
        for j in 2..=(n - 1) {
            let mut inner = Series::<Rational>::zero(order);
            for p in 1..=(n - j) {
                let weight = inv_factorial(p);
                for parts in compositions(n - j, p) {
                    let mut word = comps[parts[0] - 1].clone();
                    for q in &parts[1..] {
                        word = word.concat_mul(&comps[q - 1]);
                    }
                    inner = &inner + &graft(&word, &gen).scale_rational(&weight);
                }
            }
            for q in 1..=(j - 1) {
                let b = bernoulli_plus(q);
                if b.is_zero() {
                    continue;
                }
                let weight = b * inv_factorial(q);
                for parts in compositions(j - 1, q) {
                    let mut acc = inner.clone();
                    for p in parts.iter().rev() {
                        acc = concat_commutator(&comps[p - 1], &acc);
                    }
                    sum = &sum + &acc.scale_rational(&weight);
                }
            }
        }
        comps.push(sum.scale_rational(&Rational::new(BigInt::one(), BigInt::from(n))));
    }
    let via_log = log_concat(&exp_gl(&gen).unwrap()).unwrap();
    for (n, comp) in comps.iter().enumerate() {
        assert_eq!(
            *comp,
            via_log.homogeneous(n + 1),
            "recursion and logarithm route disagree in degree {}",
            n + 1
        );
    }
    Expansion::new(comps)
}

fn series_check(
    report: &mut Report,
    label: &str,
    lhs: Result<Series<Rational>, Error>,
    rhs: Result<Series<Rational>, Error>,
) {
    match (lhs, rhs) {
        (Ok(a), Ok(b)) => {
            let diff = &a - &b;
            let detail = match diff.terms().next() {
                None => format!("series agree, {} terms", a.len()),
                Some((f, c)) => {
                    format!("first difference at {} with coefficient {c}", f.serialize())
                }
            };
            report.push(label, diff.is_zero(), detail);
        }
        (Err(e), _) | (_, Err(e)) => {
            report.push(label, false, format!("construction failed: {e}"));
        }
    }
}

/// Round trips tying both expansions to both exponentials, plus the
/// logarithm route for each recursion, all at the given order.
pub fn verify_round_trips(order: usize) -> Report {
    let mut report = Report::new(format!("exponential round trips, order {order}"));
    let gen = Series::<Rational>::generator(order);
    let chi = postlie_magnus(order).total();
    let theta = inverse_postlie_magnus(order).total();

    series_check(
        &mut report,
        "exp_gl(chi) = exp_concat(f)",
        exp_gl(&chi),
        exp_concat(&gen),
    );
    series_check(
        &mut report,
        "exp_concat(theta) = exp_gl(f)",
        exp_concat(&theta),
        exp_gl(&gen),
    );
    series_check(
        &mut report,
        "chi recursion matches log_gl(exp_concat(f))",
        Ok(chi),
        exp_concat(&gen).and_then(|e| log_gl(&e)),
    );
    series_check(
        &mut report,
        "theta recursion matches log_concat(exp_gl(f))",
        Ok(theta),
        exp_gl(&gen).and_then(|e| log_concat(&e)),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::hopf::is_primitive;
    use crate::tree::Forest;

    fn series(order: usize, terms: &[(i64, i64, &str)]) -> Series<Rational> {
        let mut s = Series::zero(order);
        for (num, den, forest) in terms {
            s.add_term(Forest::parse(forest).unwrap(), rat(*num, *den));
        }
        s
    }

    #[test]
    fn bernoulli_low_values() {
        let expect = [
            (0, 1, 1),
            (1, -1, 2),
            (2, 1, 6),
            (3, 0, 1),
            (4, -1, 30),
            (5, 0, 1),
            (6, 1, 42),
            (8, -1, 30),
            (10, 5, 66),
            (12, -691, 2730),
        ];
        for (n, num, den) in expect {
            assert_eq!(bernoulli(n), rat(num, den), "B_{n}");
        }
    }

    #[test]
    fn bernoulli_matches_exponential_generating_series() {
        // x/(e^x - 1): convolution with the shifted exponential must collapse.
        for n in 0..=12usize {
            let mut sum = Rational::zero();
            for k in 0..=n {
                sum += bernoulli(k) * inv_factorial(k) * inv_factorial(n + 1 - k);
            }
            let expect = if n == 0 { Rational::one() } else { Rational::zero() };
            assert_eq!(sum, expect, "degree {n}");
        }
    }

    #[test]
    fn composition_enumeration() {
        assert_eq!(compositions(4, 2), vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert_eq!(compositions(3, 3), vec![vec![1, 1, 1]]);
        assert_eq!(compositions(2, 3), Vec::<Vec<usize>>::new());
        for n in 1..=8usize {
            let count: usize = (1..=n).map(|k| compositions(n, k).len()).sum();
            assert_eq!(count, 1 << (n - 1), "compositions of {n}");
        }
    }

    #[test]
    fn magnus_low_degrees() {
        let chi = postlie_magnus(3);
        assert_eq!(*chi.component(1), series(3, &[(1, 1, "o")]));
        assert_eq!(*chi.component(2), series(3, &[(-1, 2, "o(o)")]));
        assert_eq!(
            *chi.component(3),
            series(
                3,
                &[
                    (1, 12, "o(o o)"),
                    (1, 3, "o(o(o))"),
                    (1, 12, "o(o) o"),
                    (-1, 12, "o o(o)"),
                ]
            )
        );
    }

    #[test]
    fn inverse_magnus_low_degrees() {
        let theta = inverse_postlie_magnus(4);
        assert_eq!(*theta.component(1), series(4, &[(1, 1, "o")]));
        assert_eq!(*theta.component(2), series(4, &[(1, 2, "o(o)")]));
        assert_eq!(
            *theta.component(3),
            series(
                4,
                &[
                    (1, 6, "o(o o)"),
                    (1, 6, "o(o(o))"),
                    (1, 12, "o o(o)"),
                    (-1, 12, "o(o) o"),
                ]
            )
        );
        // 1/24 (f |> (f |> (f |> f)) + [f, f |> (f |> f)]) expanded over forests.
        let nested = series(
            4,
            &[
                (1, 24, "o(o o o)"),
                (1, 24, "o(o(o) o)"),
                (1, 12, "o(o o(o))"),
                (1, 24, "o(o(o o))"),
                (1, 24, "o(o(o(o)))"),
                (1, 24, "o o(o o)"),
                (1, 24, "o o(o(o))"),
                (-1, 24, "o(o o) o"),
                (-1, 24, "o(o(o)) o"),
            ],
        );
        assert_eq!(*theta.component(4), nested);
    }

    #[test]
    fn expansions_are_mutually_inverse() {
        let order = 5;
        let gen = Series::<Rational>::generator(order);
        let chi = postlie_magnus(order);
        let theta = inverse_postlie_magnus(order);
        let chi_of_theta = log_gl(&exp_concat(&theta.total()).unwrap()).unwrap();
        assert_eq!(chi_of_theta, gen);
        let theta_of_chi = log_concat(&exp_gl(&chi.total()).unwrap()).unwrap();
        assert_eq!(theta_of_chi, gen);
    }

    #[test]
    fn components_are_primitive() {
        for comp in postlie_magnus(5).components() {
            assert!(is_primitive(comp));
        }
        for comp in inverse_postlie_magnus(5).components() {
            assert!(is_primitive(comp));
        }
    }

    #[test]
    fn round_trip_suite_passes_at_low_order() {
        let report = verify_round_trips(4);
        assert!(report.passed(), "{report}");
        assert_eq!(report.checks.len(), 4);
    }
}
