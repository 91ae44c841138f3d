//! Shared helpers for the criterion benchmarks.

use postlie::coeff::rat;
use postlie::tree::{enumerate_forests, Alphabet};
use postlie::{Rational, Series};

/// Dense series over every forest up to `order`, with small distinct
/// coefficients so products cannot collapse by accident.
pub fn dense_series(order: usize) -> Series<Rational> {
    let alphabet = Alphabet::default();
    let mut s = Series::zero(order);
    let mut k: i64 = 0;
    for degree in 0..=order {
        for forest in enumerate_forests(&alphabet, degree) {
            k += 1;
            let sign = if k % 2 == 0 { -1 } else { 1 };
            s.add_term(forest, rat(sign * k, (k % 5) + 1));
        }
    }
    s
}
