//! Plain-text and LaTeX renderers for forest series.
//!
//! Text terms look like `-1/2 * o(o)`; unit coefficients are dropped and the
//! sign is folded into the join. LaTeX wraps coefficients in `\frac` and
//! separates juxtaposed trees with thin spaces.

use num_traits::{One, Signed};
use postlie::{Coeff, Laurent, Rational, Series};

fn signed_join(out: &mut String, first: bool, negative: bool) {
    if first {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
}

fn text_term(out: &mut String, magnitude: Option<&Rational>, raw: Option<String>, forest: &str) {
    match (magnitude, raw) {
        (Some(mag), _) if forest == "1" => out.push_str(&mag.to_string()),
        (Some(mag), _) if mag.is_one() => out.push_str(forest),
        (Some(mag), _) => {
            out.push_str(&mag.to_string());
            out.push_str(" * ");
            out.push_str(forest);
        }
        (None, Some(coeff)) if forest == "1" => out.push_str(&coeff),
        (None, Some(coeff)) => {
            out.push_str(&coeff);
            out.push_str(" * ");
            out.push_str(forest);
        }
        (None, None) => unreachable!(),
    }
}

pub fn text_rational(series: &Series<Rational>) -> String {
    if series.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (forest, coeff)) in series.terms().enumerate() {
        let negative = coeff.is_negative();
        signed_join(&mut out, i == 0, negative);
        let magnitude = coeff.abs();
        text_term(&mut out, Some(&magnitude), None, forest.serialize());
    }
    out
}

pub fn text_laurent(series: &Series<Laurent>) -> String {
    if series.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (forest, coeff)) in series.terms().enumerate() {
        match coeff.try_constant() {
            Some(c) => {
                let negative = c.is_negative();
                signed_join(&mut out, i == 0, negative);
                text_term(&mut out, Some(&c.abs()), None, forest.serialize());
            }
            None => {
                signed_join(&mut out, i == 0, false);
                text_term(&mut out, None, Some(format!("({coeff})")), forest.serialize());
            }
        }
    }
    out
}

fn latex_forest(serialized: &str) -> String {
    serialized.replace(' ', "\\, ")
}

fn latex_term(out: &mut String, coeff: Option<String>, forest: &str) {
    let forest_is_unit = forest == "1";
    match coeff {
        Some(c) if forest_is_unit => out.push_str(&c),
        Some(c) => {
            out.push_str(&c);
            out.push_str("\\, ");
            out.push_str(&latex_forest(forest));
        }
        None if forest_is_unit => out.push('1'),
        None => out.push_str(&latex_forest(forest)),
    }
}

pub fn latex_rational(series: &Series<Rational>) -> String {
    if series.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (forest, coeff)) in series.terms().enumerate() {
        let negative = coeff.is_negative();
        signed_join(&mut out, i == 0, negative);
        let magnitude = coeff.abs();
        let rendered = (!magnitude.is_one()).then(|| magnitude.latex());
        latex_term(&mut out, rendered, forest.serialize());
    }
    out
}

pub fn latex_laurent(series: &Series<Laurent>) -> String {
    if series.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (forest, coeff)) in series.terms().enumerate() {
        match coeff.try_constant() {
            Some(c) => {
                let negative = c.is_negative();
                signed_join(&mut out, i == 0, negative);
                let magnitude = c.abs();
                let rendered = (!magnitude.is_one()).then(|| magnitude.latex());
                latex_term(&mut out, rendered, forest.serialize());
            }
            None => {
                signed_join(&mut out, i == 0, false);
                latex_term(&mut out, Some(coeff.latex()), forest.serialize());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use postlie::coeff::rat;
    use postlie::tree::Forest;

    fn series(terms: &[(i64, i64, &str)]) -> Series<Rational> {
        let mut s = Series::zero(6);
        for (num, den, forest) in terms {
            s.add_term(Forest::parse(forest).unwrap(), rat(*num, *den));
        }
        s
    }

    #[test]
    fn text_folds_signs_and_drops_unit_coefficients() {
        let s = series(&[(1, 1, "o"), (-1, 2, "o(o)"), (1, 12, "o(o o)")]);
        assert_eq!(text_rational(&s), "o - 1/2 * o(o) + 1/12 * o(o o)");
        assert_eq!(text_rational(&series(&[(-1, 2, "o(o)")])), "-1/2 * o(o)");
        assert_eq!(text_rational(&Series::zero(3)), "0");
    }

    #[test]
    fn latex_uses_thin_spaces_between_trees() {
        let s = series(&[(1, 2, "o o")]);
        assert_eq!(latex_rational(&s), "\\frac{1}{2}\\, o\\, o");
        let neg = series(&[(-1, 1, "o(o)"), (2, 1, "o o(o)")]);
        assert_eq!(latex_rational(&neg), "-o(o) + 2\\, o\\, o(o)");
    }

    #[test]
    fn laurent_constants_render_like_rationals() {
        let mut s = Series::<Laurent>::zero(4);
        s.add_term(
            Forest::parse("o(o)").unwrap(),
            Laurent::monomial(0, rat(-1, 2)),
        );
        assert_eq!(text_laurent(&s), "-1/2 * o(o)");
        assert_eq!(latex_laurent(&s), "-\\frac{1}{2}\\, o(o)");
        let mut v = Series::<Laurent>::zero(4);
        v.add_term(Forest::parse("o").unwrap(), Laurent::var());
        let text = text_laurent(&v);
        assert!(text.contains("* o"), "{text}");
    }
}
