//! Frozen reference expansions through order five, entered in operator form
//! (graftings and concatenation commutators of the generator) and expanded to
//! the forest basis. The recursions are tested against these, so the two
//! sides come from genuinely different computations.

use crate::coeff::{rat, Rational};
use crate::hopf::{concat_commutator, graft};
use crate::magnus::Expansion;
use crate::series::Series;

const ORDER: usize = 5;

type S = Series<Rational>;

fn g(a: &S, b: &S) -> S {
    graft(a, b)
}

fn br(a: &S, b: &S) -> S {
    concat_commutator(a, b)
}

fn sc(num: i64, den: i64, s: &S) -> S {
    s.scale(&rat(num, den))
}

/// Expansion components of the direct map, orders one to five.
pub fn chi_reference() -> Expansion<Rational> {
    let f = &S::generator(ORDER);
    let a = &g(f, f); // f |> f
    let b = &g(f, a); // f |> (f |> f)
    let c = &g(a, f); // (f |> f) |> f

    let one = f.clone();
    let two = sc(-1, 2, a);
    let three = &(&sc(1, 12, b) + &sc(1, 4, c)) + &sc(1, 12, &br(a, f));
    let four = &sc(-1, 12, &(&(&g(a, a) + &g(b, f)) + &g(c, f)))
        + &sc(1, 24, &(&br(f, b) + &br(f, c)));

    let head = sc(-1, 720, &g(f, &g(f, b)));
    let block = &(&(&(&(&(&(&(&(&(&(&g(a, b) - &g(f, &g(c, f))) - &g(f, &g(b, f)))
        - &g(f, &g(f, c)))
        + &sc(5, 1, &g(b, a)))
        + &sc(5, 1, &g(c, a)))
        + &sc(6, 1, &g(&g(a, a), f)))
        + &sc(3, 1, &g(&g(b, f), f)))
        + &sc(3, 1, &g(&g(f, b), f)))
        + &sc(3, 1, &g(&g(f, c), f)))
        + &sc(3, 1, &g(a, c)))
        + &sc(3, 1, &g(&g(c, f), f));
    let brackets = &(&(&(&(&sc(1, 180, &br(f, &(&br(f, b) - &g(f, b))))
        - &sc(1, 120, &br(a, b)))
        - &sc(1, 36, &br(f, &g(a, a))))
        - &sc(1, 72, &br(f, &(&(&g(f, c) + &g(b, f)) + &g(c, f)))))
        - &sc(1, 360, &br(a, &br(f, a))))
        + &sc(1, 720, &br(f, &br(f, &br(f, a))));
    let five = &(&head + &sc(1, 144, &block)) + &brackets;

    Expansion::new(vec![one, two, three, four, five])
}

/// Expansion components of the inverse map, orders one to five.
pub fn theta_reference() -> Expansion<Rational> {
    let f = &S::generator(ORDER);
    let a = &g(f, f);
    let b = &g(f, a);

    let one = f.clone();
    let two = sc(1, 2, a);
    let three = &sc(1, 6, b) + &sc(1, 12, &br(f, a));
    let four = sc(1, 24, &(&g(f, b) + &br(f, b)));
    let five = &(&(&(&sc(1, 120, &g(f, &g(f, b))) + &sc(1, 80, &br(f, &g(f, b))))
        + &sc(1, 720, &(&br(f, &br(f, b)) - &br(f, &br(f, &br(f, a))))))
        + &sc(1, 120, &br(a, b)))
        - &sc(1, 240, &br(a, &br(f, a)));

    Expansion::new(vec![one, two, three, four, five])
}
