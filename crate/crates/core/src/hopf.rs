//! The Hopf algebra of forests and its post-Lie operations.
//!
//! Forests form the free associative algebra on trees under concatenation.
//! Trees are primitive for the unshuffle coproduct, and left grafting of
//! single trees extends to whole series by the rules
//!
//! ```text
//! 1 ▷ X = X        x X ▷ y = x ▷ (X ▷ y) - (x ▷ X) ▷ y        X ▷ YZ = (X₁ ▷ Y)(X₂ ▷ Z)
//! ```
//!
//! which also give the Grossman-Larson product `X ∗ Y = X₁ (X₂ ▷ Y)`.
//!
//! All structure constants are integers. They are computed once per basis
//! pair and memoized; series operations only combine cached integer data
//! with exact coefficient arithmetic.

use crate::coeff::{rat, Coeff, Rational};
use crate::error::Error;
use crate::report::Report;
use crate::series::Series;
use crate::tree::{
    b_minus, b_plus, enumerate_forests, enumerate_trees, graft_all, Alphabet, Forest, Tree,
    UNDECORATED,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

type IntCombo = Vec<(Forest, i64)>;
type PairCombo = Vec<(Forest, Forest, i64)>;
type PairCache = Mutex<HashMap<(Forest, Forest), Arc<IntCombo>>>;

fn unshuffle_cache() -> &'static Mutex<HashMap<Forest, Arc<PairCombo>>> {
    static CACHE: OnceLock<Mutex<HashMap<Forest, Arc<PairCombo>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn graft_cache() -> &'static PairCache {
    static CACHE: OnceLock<PairCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn gl_cache() -> &'static PairCache {
    static CACHE: OnceLock<PairCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn antipode_cache() -> &'static Mutex<HashMap<Forest, Arc<IntCombo>>> {
    static CACHE: OnceLock<Mutex<HashMap<Forest, Arc<IntCombo>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn combo(acc: BTreeMap<Forest, i64>) -> IntCombo {
    acc.into_iter().filter(|(_, m)| *m != 0).collect()
}

/// Unshuffle splittings of a basis forest, with multiplicities.
fn unshuffle_kernel(f: &Forest) -> Arc<PairCombo> {
    if let Some(hit) = unshuffle_cache().lock().unwrap().get(f) {
        return hit.clone();
    }
    let trees = f.trees();
    let n = trees.len();
    let mut acc: BTreeMap<(Forest, Forest), i64> = BTreeMap::new();
    for mask in 0u32..(1 << n) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (i, t) in trees.iter().enumerate() {
            if mask & (1 << i) != 0 {
                left.push(t.clone());
            } else {
                right.push(t.clone());
            }
        }
        *acc.entry((Forest::new(left), Forest::new(right))).or_insert(0) += 1;
    }
    let out = Arc::new(
        acc.into_iter()
            .map(|((a, b), m)| (a, b, m))
            .collect::<PairCombo>(),
    );
    unshuffle_cache().lock().unwrap().insert(f.clone(), out.clone());
    out
}

/// All forests obtained by grafting `scion` at one vertex of `host`;
/// repetitions kept.
fn graft_into_forest(scion: &Tree, host: &Forest) -> Vec<Forest> {
    let mut out = Vec::new();
    for (i, t) in host.trees().iter().enumerate() {
        for grafted in graft_all(scion, t) {
            let mut trees = host.trees().to_vec();
            trees[i] = grafted;
            out.push(Forest::new(trees));
        }
    }
    out
}

/// Structure constants of the extended grafting `f ▷ g` on basis forests.
fn graft_kernel(f: &Forest, g: &Forest) -> Arc<IntCombo> {
    let key = (f.clone(), g.clone());
    if let Some(hit) = graft_cache().lock().unwrap().get(&key) {
        return hit.clone();
    }
    let mut acc: BTreeMap<Forest, i64> = BTreeMap::new();
    if g.is_empty() {
        if f.is_empty() {
            acc.insert(Forest::unit(), 1);
        }
    } else if f.is_empty() {
        acc.insert(g.clone(), 1);
    } else if g.len() == 1 {
        let sigma = &f.trees()[0];
        let h = Forest::new(f.trees()[1..].to_vec());
        for (t, m) in graft_kernel(&h, g).iter() {
            for r in graft_into_forest(sigma, t) {
                *acc.entry(r).or_insert(0) += m;
            }
        }
        for hp in graft_into_forest(sigma, &h) {
            for (t, m) in graft_kernel(&hp, g).iter() {
                *acc.entry(t.clone()).or_insert(0) -= m;
            }
        }
    } else {
        let head = Forest::single(g.trees()[0].clone());
        let rest = Forest::new(g.trees()[1..].to_vec());
        for (f1, f2, m) in unshuffle_kernel(f).iter() {
            for (a, ma) in graft_kernel(f1, &head).iter() {
                for (b, mb) in graft_kernel(f2, &rest).iter() {
                    *acc.entry(a.concat(b)).or_insert(0) += m * ma * mb;
                }
            }
        }
    }
    let out = Arc::new(combo(acc));
    graft_cache().lock().unwrap().insert(key, out.clone());
    out
}

/// Structure constants of the Grossman-Larson product on basis forests.
fn gl_kernel(f: &Forest, g: &Forest) -> Arc<IntCombo> {
    let key = (f.clone(), g.clone());
    if let Some(hit) = gl_cache().lock().unwrap().get(&key) {
        return hit.clone();
    }
    let mut acc: BTreeMap<Forest, i64> = BTreeMap::new();
    for (f1, f2, m) in unshuffle_kernel(f).iter() {
        for (r, mr) in graft_kernel(f2, g).iter() {
            *acc.entry(f1.concat(r)).or_insert(0) += m * mr;
        }
    }
    let out = Arc::new(combo(acc));
    gl_cache().lock().unwrap().insert(key, out.clone());
    out
}

/// Antipode of the Grossman-Larson Hopf algebra on a basis forest, by the
/// graded-connected recursion.
fn antipode_kernel(f: &Forest) -> Arc<IntCombo> {
    if let Some(hit) = antipode_cache().lock().unwrap().get(f) {
        return hit.clone();
    }
    let mut acc: BTreeMap<Forest, i64> = BTreeMap::new();
    if f.is_empty() {
        acc.insert(Forest::unit(), 1);
    } else {
        *acc.entry(f.clone()).or_insert(0) -= 1;
        for (f1, f2, m) in unshuffle_kernel(f).iter() {
            if f1.is_empty() || f2.is_empty() {
                continue;
            }
            for (s, ms) in antipode_kernel(f2).iter() {
                for (t, mt) in gl_kernel(f1, s).iter() {
                    *acc.entry(t.clone()).or_insert(0) -= m * ms * mt;
                }
            }
        }
    }
    let out = Arc::new(combo(acc));
    antipode_cache().lock().unwrap().insert(f.clone(), out.clone());
    out
}

/// Materialized unshuffle coproduct of a series.
pub fn unshuffle<C: Coeff>(x: &Series<C>) -> Vec<(Forest, Forest, C)> {
    let mut acc: BTreeMap<(Forest, Forest), C> = BTreeMap::new();
    for (f, c) in x.terms() {
        for (a, b, m) in unshuffle_kernel(f).iter() {
            let add = c.clone() * C::from_integer(*m);
            match acc.entry((a.clone(), b.clone())) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(add);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() = e.get().clone() + add;
                }
            }
        }
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((a, b), c)| (a, b, c))
        .collect()
}

fn bilinear<C: Coeff>(
    x: &Series<C>,
    y: &Series<C>,
    kernel: impl Fn(&Forest, &Forest) -> Arc<IntCombo>,
) -> Series<C> {
    let order = x.order().min(y.order());
    let mut s = Series::zero(order);
    for (f, a) in x.terms() {
        if f.degree() > order {
            continue;
        }
        for (g, b) in y.terms() {
            if f.degree() + g.degree() > order {
                break;
            }
            let c = a.clone() * b.clone();
            for (r, m) in kernel(f, g).iter() {
                s.add_term(r.clone(), c.clone() * C::from_integer(*m));
            }
        }
    }
    s
}

/// Extended left grafting `x ▷ y`.
pub fn graft<C: Coeff>(x: &Series<C>, y: &Series<C>) -> Series<C> {
    bilinear(x, y, graft_kernel)
}

/// Grossman-Larson product `x ∗ y = x₁ (x₂ ▷ y)`.
pub fn gl_product<C: Coeff>(x: &Series<C>, y: &Series<C>) -> Series<C> {
    bilinear(x, y, gl_kernel)
}

/// The same product computed the planar way, as `B₋(f ▷ B₊(g))` on basis
/// forests. Kept separate from [`gl_product`] as a cross-check.
pub fn gl_product_via_bplus<C: Coeff>(x: &Series<C>, y: &Series<C>) -> Series<C> {
    bilinear(x, y, |f, g| {
        let host = Forest::single(b_plus(g, UNDECORATED));
        let grafted = graft_kernel(f, &host);
        Arc::new(
            grafted
                .iter()
                .map(|(t, m)| {
                    debug_assert_eq!(t.len(), 1);
                    (b_minus(&t.trees()[0]), *m)
                })
                .collect(),
        )
    })
}

/// Antipode of the Grossman-Larson Hopf algebra, extended linearly.
pub fn gl_antipode<C: Coeff>(x: &Series<C>) -> Series<C> {
    let mut s = Series::zero(x.order());
    for (f, c) in x.terms() {
        for (r, m) in antipode_kernel(f).iter() {
            s.add_term(r.clone(), c.clone() * C::from_integer(*m));
        }
    }
    s
}

/// Concatenation commutator `[x, y] = xy - yx`.
pub fn concat_commutator<C: Coeff>(x: &Series<C>, y: &Series<C>) -> Series<C> {
    &x.concat_mul(y) - &y.concat_mul(x)
}

#[derive(Clone, Copy)]
enum ProductKind {
    Concat,
    GrossmanLarson,
}

fn product<C: Coeff>(kind: ProductKind, x: &Series<C>, y: &Series<C>) -> Series<C> {
    match kind {
        ProductKind::Concat => x.concat_mul(y),
        ProductKind::GrossmanLarson => gl_product(x, y),
    }
}

fn exp_with<C: Coeff>(kind: ProductKind, x: &Series<C>) -> Result<Series<C>, Error> {
    if !x.counit().is_zero() {
        return Err(Error::CounitNotZero);
    }
    let order = x.order();
    let mut acc = Series::one(order);
    for k in (1..=order).rev() {
        let scaled = product(kind, x, &acc).scale_rational(&rat(1, k as i64));
        acc = &Series::one(order) + &scaled;
    }
    Ok(acc)
}

fn log_with<C: Coeff>(kind: ProductKind, x: &Series<C>) -> Result<Series<C>, Error> {
    if !x.counit().is_one() {
        return Err(Error::CounitNotOne);
    }
    let order = x.order();
    let z = x - &Series::one(order);
    if order == 0 {
        return Ok(Series::zero(0));
    }
    let mut p = Series::one(order).scale_rational(&rat(1, order as i64));
    for k in (1..order).rev() {
        p = &Series::one(order).scale_rational(&rat(1, k as i64)) - &product(kind, &z, &p);
    }
    Ok(product(kind, &z, &p))
}

/// Exponential for the concatenation product; needs counit zero.
pub fn exp_concat<C: Coeff>(x: &Series<C>) -> Result<Series<C>, Error> {
    exp_with(ProductKind::Concat, x)
}

/// Logarithm for the concatenation product; needs counit one.
pub fn log_concat<C: Coeff>(x: &Series<C>) -> Result<Series<C>, Error> {
    log_with(ProductKind::Concat, x)
}

/// Exponential for the Grossman-Larson product; needs counit zero.
pub fn exp_gl<C: Coeff>(x: &Series<C>) -> Result<Series<C>, Error> {
    exp_with(ProductKind::GrossmanLarson, x)
}

/// Logarithm for the Grossman-Larson product; needs counit one.
pub fn log_gl<C: Coeff>(x: &Series<C>) -> Result<Series<C>, Error> {
    log_with(ProductKind::GrossmanLarson, x)
}

fn delta_map<C: Coeff>(x: &Series<C>) -> BTreeMap<(Forest, Forest), C> {
    unshuffle(x)
        .into_iter()
        .map(|(a, b, c)| ((a, b), c))
        .collect()
}

/// Whether `Δ(x) = x ⊗ 1 + 1 ⊗ x` holds for every stored term.
pub fn is_primitive<C: Coeff>(x: &Series<C>) -> bool {
    let mut expected: BTreeMap<(Forest, Forest), C> = BTreeMap::new();
    for (f, c) in x.terms() {
        for key in [(f.clone(), Forest::unit()), (Forest::unit(), f.clone())] {
            let entry = expected.entry(key).or_insert_with(C::zero);
            *entry = entry.clone() + c.clone();
        }
    }
    expected.retain(|_, c| !c.is_zero());
    delta_map(x) == expected
}

/// Whether `Δ(x) = x ⊗ x` holds up to the truncation order.
pub fn is_grouplike<C: Coeff>(x: &Series<C>) -> bool {
    let order = x.order();
    let mut expected: BTreeMap<(Forest, Forest), C> = BTreeMap::new();
    for (f, a) in x.terms() {
        for (g, b) in x.terms() {
            if f.degree() + g.degree() > order {
                break;
            }
            let entry = expected
                .entry((f.clone(), g.clone()))
                .or_insert_with(C::zero);
            *entry = entry.clone() + a.clone() * b.clone();
        }
    }
    expected.retain(|_, c| !c.is_zero());
    delta_map(x) == expected
}

fn forests_up_to(max_degree: usize) -> Vec<Forest> {
    let alphabet = Alphabet::default();
    (0..=max_degree)
        .flat_map(|d| enumerate_forests(&alphabet, d))
        .collect()
}

fn trees_up_to(max_degree: usize) -> Vec<Tree> {
    let alphabet = Alphabet::default();
    (1..=max_degree)
        .flat_map(|d| enumerate_trees(&alphabet, d))
        .collect()
}

fn random_series(order: usize, rng: &mut impl Rng) -> Series<Rational> {
    let mut s = Series::zero(order);
    for f in forests_up_to(order) {
        let num = rng.gen_range(-4i64..=4);
        if num != 0 {
            s.add_term(f, rat(num, rng.gen_range(1i64..=3)));
        }
    }
    s
}

/// Checks the compatibilities between the coproduct, the two products, the
/// antipode and the grafting operation on basis elements. Families that
/// tensor two basis forests run through combined degree `max_degree - 1`;
/// product and triple families run through `max_degree`.
pub fn verify_hopf_properties(max_degree: usize) -> Report {
    let mut report = Report::new(format!(
        "Hopf and post-Lie checks through degree {max_degree}"
    ));
    let pair_degree = max_degree.saturating_sub(1);
    let basis = |f: &Forest| Series::<Rational>::from_forest(max_degree, f.clone());
    let tree_basis = |t: &Tree| Series::<Rational>::from_tree(max_degree, t.clone());

    let pairs = forests_up_to(pair_degree);
    let mut delta_fail: Option<String> = None;
    let mut counit_fail: Option<String> = None;
    let mut pair_count = 0usize;
    for x in &pairs {
        for y in &pairs {
            if x.degree() + y.degree() > pair_degree {
                continue;
            }
            pair_count += 1;
            let witness = || format!("x = {}, y = {}", x.serialize(), y.serialize());
            let grafted = graft(&basis(x), &basis(y));
            let expected_counit = if x.is_empty() && y.is_empty() {
                rat(1, 1)
            } else {
                rat(0, 1)
            };
            if counit_fail.is_none() && grafted.counit() != expected_counit {
                counit_fail = Some(witness());
            }
            if delta_fail.is_some() {
                continue;
            }
            let mut rhs: BTreeMap<(Forest, Forest), Rational> = BTreeMap::new();
            for (x1, x2, cx) in unshuffle(&basis(x)) {
                for (y1, y2, cy) in unshuffle(&basis(y)) {
                    let scale = cx.clone() * cy.clone();
                    for (a, ma) in graft_kernel(&x1, &y1).iter() {
                        for (b, mb) in graft_kernel(&x2, &y2).iter() {
                            let entry = rhs
                                .entry((a.clone(), b.clone()))
                                .or_insert_with(Rational::zero);
                            *entry = entry.clone() + scale.clone() * rat(ma * mb, 1);
                        }
                    }
                }
            }
            rhs.retain(|_, c| !c.is_zero());
            if delta_map(&grafted) != rhs {
                delta_fail = Some(witness());
            }
        }
    }
    report.push(
        "unshuffle coproduct is compatible with grafting",
        delta_fail.is_none(),
        match &delta_fail {
            Some(w) => format!("first failure at {w}"),
            None => format!("{pair_count} basis pairs through degree {pair_degree}"),
        },
    );
    report.push(
        "counit is multiplicative for grafting",
        counit_fail.is_none(),
        match &counit_fail {
            Some(w) => format!("first failure at {w}"),
            None => format!("{pair_count} basis pairs through degree {pair_degree}"),
        },
    );

    let full = forests_up_to(max_degree);
    let mut action_fail: Option<String> = None;
    let mut triple_count = 0usize;
    'action: for x in &full {
        for y in &full {
            if x.degree() + y.degree() > max_degree {
                continue;
            }
            let xy = gl_product(&basis(x), &basis(y));
            for z in &full {
                if x.degree() + y.degree() + z.degree() > max_degree {
                    continue;
                }
                triple_count += 1;
                let lhs = graft(&basis(x), &graft(&basis(y), &basis(z)));
                if lhs != graft(&xy, &basis(z)) {
                    action_fail = Some(format!(
                        "x = {}, y = {}, z = {}",
                        x.serialize(),
                        y.serialize(),
                        z.serialize()
                    ));
                    break 'action;
                }
            }
        }
    }
    report.push(
        "grafting is an action of the Grossman-Larson algebra",
        action_fail.is_none(),
        match &action_fail {
            Some(w) => format!("first failure at {w}"),
            None => format!("{triple_count} basis triples through degree {max_degree}"),
        },
    );

    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let mut assoc_fail: Option<String> = None;
    for round in 0..2 {
        let x = random_series(max_degree, &mut rng);
        let y = random_series(max_degree, &mut rng);
        let z = random_series(max_degree, &mut rng);
        if gl_product(&gl_product(&x, &y), &z) != gl_product(&x, &gl_product(&y, &z)) {
            assoc_fail = Some(format!("failure in round {round}"));
            break;
        }
    }
    report.push(
        "Grossman-Larson product is associative on random series",
        assoc_fail.is_none(),
        match &assoc_fail {
            Some(w) => w.clone(),
            None => format!("2 seeded random triples through degree {max_degree}"),
        },
    );

    let mut route_fail: Option<String> = None;
    let mut route_count = 0usize;
    'route: for x in &full {
        for y in &full {
            if x.degree() + y.degree() > max_degree {
                continue;
            }
            route_count += 1;
            if gl_product(&basis(x), &basis(y)) != gl_product_via_bplus(&basis(x), &basis(y)) {
                route_fail = Some(format!("x = {}, y = {}", x.serialize(), y.serialize()));
                break 'route;
            }
        }
    }
    report.push(
        "planar route matches the Grossman-Larson product",
        route_fail.is_none(),
        match &route_fail {
            Some(w) => format!("first failure at {w}"),
            None => format!("{route_count} basis pairs through degree {max_degree}"),
        },
    );

    let mut primitive = Series::<Rational>::zero(max_degree);
    for (k, t) in trees_up_to(max_degree.min(4)).into_iter().enumerate() {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        primitive.add_term(Forest::single(t), rat(sign * (k as i64 + 1), (k as i64 % 3) + 2));
    }
    let sample_len = primitive.len();
    let concat_grouplike = exp_concat(&primitive)
        .map(|e| is_grouplike(&e))
        .unwrap_or(false);
    let gl_grouplike = exp_gl(&primitive).map(|e| is_grouplike(&e)).unwrap_or(false);
    report.push(
        "exponentials send primitives to group-likes",
        concat_grouplike && gl_grouplike,
        format!(
            "concatenation {}, Grossman-Larson {}, on a {sample_len}-tree primitive",
            if concat_grouplike { "ok" } else { "failed" },
            if gl_grouplike { "ok" } else { "failed" },
        ),
    );

    let trees = trees_up_to(max_degree);
    let assoc = |a: &Series<Rational>, b: &Series<Rational>, c: &Series<Rational>| {
        &graft(a, &graft(b, c)) - &graft(&graft(a, b), c)
    };
    let mut derivation_fail: Option<String> = None;
    let mut associator_fail: Option<String> = None;
    let mut tree_triples = 0usize;
    for x in &trees {
        for y in &trees {
            for z in &trees {
                if x.degree() + y.degree() + z.degree() > max_degree {
                    continue;
                }
                tree_triples += 1;
                let witness = || {
                    format!(
                        "x = {}, y = {}, z = {}",
                        x.serialize(),
                        y.serialize(),
                        z.serialize()
                    )
                };
                let (sx, sy, sz) = (tree_basis(x), tree_basis(y), tree_basis(z));
                if derivation_fail.is_none() {
                    let lhs = graft(&sx, &concat_commutator(&sy, &sz));
                    let rhs = &concat_commutator(&graft(&sx, &sy), &sz)
                        + &concat_commutator(&sy, &graft(&sx, &sz));
                    if lhs != rhs {
                        derivation_fail = Some(witness());
                    }
                }
                if associator_fail.is_none() {
                    let lhs = graft(&concat_commutator(&sx, &sy), &sz);
                    let rhs = &assoc(&sx, &sy, &sz) - &assoc(&sy, &sx, &sz);
                    if lhs != rhs {
                        associator_fail = Some(witness());
                    }
                }
            }
        }
    }
    report.push(
        "grafting is a derivation of the commutator",
        derivation_fail.is_none(),
        match &derivation_fail {
            Some(w) => format!("first failure at {w}"),
            None => format!("{tree_triples} tree triples through degree {max_degree}"),
        },
    );
    report.push(
        "commutator grafting matches the associator difference",
        associator_fail.is_none(),
        match &associator_fail {
            Some(w) => format!("first failure at {w}"),
            None => format!("{tree_triples} tree triples through degree {max_degree}"),
        },
    );

    let mut twist_fail: Option<String> = None;
    let mut twist_count = 0usize;
    'twist: for x in &pairs {
        for y in &pairs {
            if x.degree() + y.degree() > pair_degree {
                continue;
            }
            twist_count += 1;
            let sy = basis(y);
            let mut acc = Series::<Rational>::zero(max_degree);
            for (x1, x2, m) in unshuffle(&basis(x)) {
                let twisted = graft(
                    &gl_antipode(&Series::from_forest(max_degree, x2)),
                    &sy,
                );
                acc = &acc + &gl_product(&Series::from_forest(max_degree, x1), &twisted).scale(&m);
            }
            if acc != basis(x).concat_mul(&sy) {
                twist_fail = Some(format!("x = {}, y = {}", x.serialize(), y.serialize()));
                break 'twist;
            }
        }
    }
    report.push(
        "concatenation factors through the antipode twist",
        twist_fail.is_none(),
        match &twist_fail {
            Some(w) => format!("first failure at {w}"),
            None => format!("{twist_count} basis pairs through degree {pair_degree}"),
        },
    );

    report
}
