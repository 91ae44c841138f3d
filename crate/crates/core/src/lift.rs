//! The weighted BCH recursion, evaluated in a lifted Lie algebra.
//!
//! A [`Lifted`] element `plain + R(wrapped)` pairs two forest series with
//! Laurent coefficients in the weight. `R` stays formal; the bracket closes
//! over the pair through the rules
//!
//! ```text
//! [p1 + R(r1), p2 + R(r2)]  =  (1/w)[p1,p2] + r1|>p2 - r2|>p1
//!                            + R([r1,r2] + r1|>r2 - r2|>r1)
//! ```
//!
//! which encode `[R(a),b] = a|>b` and `[R(a),R(b)] = R(a|>b - b|>a + [a,b])`.
//! The recursion `chi(x) = x + (1/w) ~BCH(R(chi), R~(chi))` with
//! `R~ = -w id - R` is solved degree by degree; the wrapped part of the
//! remainder must cancel identically, which is checked, not assumed. The
//! simplified route `chi(x) = x - (1/w) ~BCH(-R(chi), -w x)` and the direct
//! inverse `x - (1/w) ~BCH(R(x), R~(x))` use the same machinery.

use crate::bch::{bch_table, evaluate_table, LieAlgebra};
use crate::coeff::{Laurent, Rational};
use crate::error::Error;
use crate::hopf::{concat_commutator, graft};
use crate::magnus::{inverse_postlie_magnus, postlie_magnus, Expansion};
use crate::report::Report;
use crate::series::Series;
use crate::tree::Forest;
use num_traits::{One, Zero};

/// `plain + R(wrapped)` with both parts forest series over the weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Lifted {
    pub plain: Series<Laurent>,
    pub wrapped: Series<Laurent>,
}

impl Lifted {
    pub fn zero(order: usize) -> Self {
        Lifted {
            plain: Series::zero(order),
            wrapped: Series::zero(order),
        }
    }

    pub fn plain(series: Series<Laurent>) -> Self {
        let order = series.order();
        Lifted { plain: series, wrapped: Series::zero(order) }
    }

    pub fn wrapped(series: Series<Laurent>) -> Self {
        let order = series.order();
        Lifted { plain: Series::zero(order), wrapped: series }
    }
}

fn inverse_weight() -> Laurent {
    Laurent::monomial(-1, Rational::one())
}

fn minus_weight() -> Laurent {
    Laurent::monomial(1, -Rational::one())
}

fn minus_one() -> Laurent {
    Laurent::monomial(0, -Rational::one())
}

/// The lifted elements at a fixed truncation order.
pub struct LiftedAlgebra {
    pub order: usize,
}

impl LiftedAlgebra {
    pub fn new(order: usize) -> Self {
        LiftedAlgebra { order }
    }
}

impl LieAlgebra for LiftedAlgebra {
    type Elem = Lifted;

    fn zero(&self) -> Lifted {
        Lifted::zero(self.order)
    }

    fn add(&self, x: &Lifted, y: &Lifted) -> Lifted {
        Lifted {
            plain: &x.plain + &y.plain,
            wrapped: &x.wrapped + &y.wrapped,
        }
    }

    fn scale(&self, c: &Rational, x: &Lifted) -> Lifted {
        Lifted {
            plain: x.plain.scale_rational(c),
            wrapped: x.wrapped.scale_rational(c),
        }
    }

    fn bracket(&self, u: &Lifted, v: &Lifted) -> Lifted {
        let plain = &(&concat_commutator(&u.plain, &v.plain).scale(&inverse_weight())
            + &graft(&u.wrapped, &v.plain))
            - &graft(&v.wrapped, &u.plain);
        let wrapped = &(&concat_commutator(&u.wrapped, &v.wrapped)
            + &graft(&u.wrapped, &v.wrapped))
            - &graft(&v.wrapped, &u.wrapped);
        Lifted { plain, wrapped }
    }
}

fn check_wrapped_vanishes(t: &Lifted) -> Result<(), Error> {
    match t.wrapped.terms().next() {
        None => Ok(()),
        Some((forest, _)) => Err(Error::WrappedPartNonzero { degree: forest.degree() }),
    }
}

fn check_input(y: &Series<Laurent>) -> Result<(), Error> {
    if !y.coeff(&Forest::unit()).is_zero() {
        return Err(Error::CounitNotZero);
    }
    Ok(())
}

/// The recursion applied to an arbitrary input series of valuation one.
///
/// With `simplified` the fixed point is taken through
/// `x - (1/w) ~BCH(-R(chi), -w x)`, otherwise through
/// `x + (1/w) ~BCH(R(chi), R~(chi))`; both must produce the same series.
pub fn bch_recursion_applied(
    y: &Series<Laurent>,
    order: usize,
    simplified: bool,
) -> Result<Series<Laurent>, Error> {
    assert!(order >= 1, "recursion needs order >= 1");
    check_input(y)?;
    let table = bch_table(order).without_linear_part();
    let mut chi = y.truncated(order);
    for n in 2..=order {
        let alg = LiftedAlgebra::new(n);
        let step = table.truncate(n);
        let t = if simplified {
            let a = Lifted::wrapped(chi.truncated(n).scale(&minus_one()));
            let b = Lifted::plain(y.truncated(n).scale(&minus_weight()));
            evaluate_table(&step, &alg, &a, &b)
        } else {
            let a = Lifted::wrapped(chi.truncated(n));
            let b = Lifted {
                plain: chi.truncated(n).scale(&minus_weight()),
                wrapped: chi.truncated(n).scale(&minus_one()),
            };
            evaluate_table(&step, &alg, &a, &b)
        };
        check_wrapped_vanishes(&t)?;
        let correction = t.plain.scale(&inverse_weight());
        chi = if simplified {
            &y.truncated(n) - &correction
        } else {
            &y.truncated(n) + &correction
        };
    }
    Ok(chi.truncated(order))
}

/// The inverse map applied to an arbitrary input series of valuation one.
pub fn bch_recursion_inverse_applied(
    y: &Series<Laurent>,
    order: usize,
) -> Result<Series<Laurent>, Error> {
    assert!(order >= 1, "recursion needs order >= 1");
    check_input(y)?;
    let table = bch_table(order).without_linear_part();
    let alg = LiftedAlgebra::new(order);
    let a = Lifted::wrapped(y.truncated(order));
    let b = Lifted {
        plain: y.truncated(order).scale(&minus_weight()),
        wrapped: y.truncated(order).scale(&minus_one()),
    };
    let t = evaluate_table(&table, &alg, &a, &b);
    check_wrapped_vanishes(&t)?;
    Ok(&y.truncated(order) - &t.plain.scale(&inverse_weight()))
}

fn into_components(total: &Series<Laurent>, order: usize) -> Vec<Series<Laurent>> {
    let comps: Vec<Series<Laurent>> = (1..=order).map(|n| total.homogeneous(n)).collect();
    for (i, comp) in comps.iter().enumerate() {
        for (forest, c) in comp.terms() {
            assert!(
                c.min_exponent().map(|k| k >= 0).unwrap_or(true),
                "negative weight power at {forest} in degree {}",
                i + 1
            );
        }
    }
    comps
}

/// Weighted expansion of the generator under the recursion.
pub fn bch_recursion(order: usize, simplified: bool) -> Result<Expansion<Laurent>, Error> {
    let gen = Series::<Laurent>::generator(order);
    let chi = bch_recursion_applied(&gen, order, simplified)?;
    Ok(Expansion::new(into_components(&chi, order)))
}

/// Weighted expansion of the generator under the inverse map.
pub fn bch_recursion_inverse(order: usize) -> Result<Expansion<Laurent>, Error> {
    let gen = Series::<Laurent>::generator(order);
    let theta = bch_recursion_inverse_applied(&gen, order)?;
    Ok(Expansion::new(into_components(&theta, order)))
}

/// Specializes Laurent components at a nonzero weight.
pub fn expansion_at_weight(
    expansion: &Expansion<Laurent>,
    weight: &Rational,
) -> Result<Expansion<Rational>, Error> {
    if weight.is_zero() {
        return Err(Error::ZeroWeight);
    }
    Ok(expansion.map_coeff(|l| l.eval(weight)))
}

/// Checks that the weight-one specialization of the recursion reproduces the
/// expansion of the generator, and the inverse map its inverse expansion.
pub fn verify_main_theorem(order: usize) -> Result<Report, Error> {
    let one = Rational::one();
    let chi_weighted = bch_recursion(order, false)?;
    let theta_weighted = bch_recursion_inverse(order)?;
    let chi = postlie_magnus(order);
    let theta = inverse_postlie_magnus(order);
    let mut report = Report::new(format!("weighted recursion at weight one, order {order}"));
    for n in 1..=order {
        let lhs = chi_weighted.component(n).map_coeff(|l| l.eval(&one));
        let rhs = chi.component(n);
        let pass = lhs == *rhs;
        let detail = if pass {
            String::new()
        } else {
            format!("difference {}", (&lhs - rhs).text())
        };
        report.push(format!("chi degree {n}"), pass, detail);
    }
    for n in 1..=order {
        let lhs = theta_weighted.component(n).map_coeff(|l| l.eval(&one));
        let rhs = theta.component(n);
        let pass = lhs == *rhs;
        let detail = if pass {
            String::new()
        } else {
            format!("difference {}", (&lhs - rhs).text())
        };
        report.push(format!("inverse degree {n}"), pass, detail);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::hopf::is_primitive;

    fn gen_series(order: usize) -> Series<Laurent> {
        Series::<Laurent>::generator(order)
    }

    fn weighted_series(order: usize, terms: &[(i32, i64, i64, &str)]) -> Series<Laurent> {
        let mut s = Series::zero(order);
        for (k, num, den, forest) in terms {
            s.add_term(
                Forest::parse(forest).unwrap(),
                Laurent::monomial(*k, rat(*num, *den)),
            );
        }
        s
    }

    #[test]
    fn bracket_encodes_the_operator_rules() {
        let order = 3;
        let alg = LiftedAlgebra::new(order);
        let x = gen_series(order);
        let y = Series::from_tree(order, crate::tree::Tree::parse("o(o)").unwrap());

        // [R(x), y] = x |> y, purely plain.
        let b = alg.bracket(&Lifted::wrapped(x.clone()), &Lifted::plain(y.clone()));
        assert_eq!(b.plain, graft(&x, &y));
        assert!(b.wrapped.is_zero());

        // [R(x), R(x)] = 0.
        let b = alg.bracket(&Lifted::wrapped(x.clone()), &Lifted::wrapped(x.clone()));
        assert!(b.plain.is_zero());
        assert!(b.wrapped.is_zero());

        // [x, y] = (1/w) [x,y], purely plain.
        let b = alg.bracket(&Lifted::plain(x.clone()), &Lifted::plain(y.clone()));
        assert_eq!(b.plain, concat_commutator(&x, &y).scale(&inverse_weight()));
        assert!(b.wrapped.is_zero());

        // [R(x), R(y)] wraps the derived bracket.
        let b = alg.bracket(&Lifted::wrapped(x.clone()), &Lifted::wrapped(y.clone()));
        assert!(b.plain.is_zero());
        let derived = &(&concat_commutator(&x, &y) + &graft(&x, &y)) - &graft(&y, &x);
        assert_eq!(b.wrapped, derived);
    }

    #[test]
    fn low_degree_components_are_the_frozen_weighted_series() {
        let chi = bch_recursion(4, false).unwrap();
        assert_eq!(*chi.component(1), weighted_series(4, &[(0, 1, 1, "o")]));
        assert_eq!(*chi.component(2), weighted_series(4, &[(0, -1, 2, "o(o)")]));
        // 1/4 (x|>x)|>x + 1/12 x|>(x|>x) + 1/12 [x|>x, x]
        assert_eq!(
            *chi.component(3),
            weighted_series(
                4,
                &[
                    (0, 1, 12, "o(o o)"),
                    (0, 1, 3, "o(o(o))"),
                    (0, 1, 12, "o(o) o"),
                    (0, -1, 12, "o o(o)"),
                ]
            )
        );
        // -1/12 [(x|>x)|>(x|>x) + ((x|>x)|>x)|>x + (x|>(x|>x))|>x]
        // + 1/24 [x, x|>(x|>x) + (x|>x)|>x]
        assert_eq!(
            *chi.component(4),
            weighted_series(
                4,
                &[
                    (0, -1, 12, "o(o(o o))"),
                    (0, -1, 4, "o(o(o(o)))"),
                    (0, -1, 12, "o(o(o) o)"),
                    (0, 1, 24, "o o(o o)"),
                    (0, 1, 12, "o o(o(o))"),
                    (0, -1, 24, "o(o o) o"),
                    (0, -1, 12, "o(o(o)) o"),
                ]
            )
        );
    }

    // Every bracket word in the recursion has exactly one plain generator
    // carrying one power of the weight, which the 1/w prefactor cancels.
    // The assembled components are therefore weight-free, and the weighted
    // expansion coincides with the unweighted one at every weight.
    #[test]
    fn components_carry_no_residual_weight_dependence() {
        let chi = bch_recursion(5, false).unwrap();
        let theta = bch_recursion_inverse(5).unwrap();
        for expansion in [&chi, &theta] {
            for comp in expansion.components() {
                for (forest, coeff) in comp.terms() {
                    assert!(
                        coeff.try_constant().is_some(),
                        "weight survives at {forest}"
                    );
                }
            }
        }
    }

    #[test]
    fn recursion_variants_agree() {
        let primary = bch_recursion(5, false).unwrap();
        let simplified = bch_recursion(5, true).unwrap();
        assert_eq!(primary, simplified);
    }

    #[test]
    fn inverse_map_low_degree() {
        let theta = bch_recursion_inverse(3).unwrap();
        assert_eq!(*theta.component(2), weighted_series(3, &[(0, 1, 2, "o(o)")]));
    }

    #[test]
    fn recursion_and_inverse_compose_to_the_identity() {
        let order = 5;
        let gen = gen_series(order);
        let chi = bch_recursion(order, false).unwrap().total();
        let back = bch_recursion_inverse_applied(&chi, order).unwrap();
        assert_eq!(back, gen);
        let theta = bch_recursion_inverse(order).unwrap().total();
        let forward = bch_recursion_applied(&theta, order, false).unwrap();
        assert_eq!(forward, gen);
    }

    #[test]
    fn components_are_homogeneous_and_primitive() {
        let chi = bch_recursion(4, false).unwrap();
        for (i, comp) in chi.components().iter().enumerate() {
            assert!(is_primitive(comp), "degree {}", i + 1);
            for (forest, _) in comp.terms() {
                assert_eq!(forest.degree(), i + 1);
            }
        }
    }

    #[test]
    fn weight_one_reproduces_the_magnus_expansions() {
        let report = verify_main_theorem(4).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn unit_input_is_rejected() {
        let mut bad = Series::<Laurent>::zero(3);
        bad.add_term(Forest::unit(), Laurent::monomial(0, rat(1, 1)));
        assert!(matches!(
            bch_recursion_applied(&bad, 3, false),
            Err(Error::CounitNotZero)
        ));
    }

    #[test]
    fn zero_weight_specialization_is_rejected() {
        let chi = bch_recursion(2, false).unwrap();
        assert!(matches!(
            expansion_at_weight(&chi, &Rational::zero()),
            Err(Error::ZeroWeight)
        ));
        let at_two = expansion_at_weight(&chi, &rat(2, 1)).unwrap();
        assert_eq!(*at_two.component(2), {
            let mut s = Series::<Rational>::zero(2);
            s.add_term(Forest::parse("o(o)").unwrap(), rat(-1, 2));
            s
        });
    }
}
