//! The magmatic isomorphism between the Butcher product and left grafting.
//!
//! On trees, Ψ fixes single vertices and turns the left Butcher product into
//! left grafting: `Ψ(σ ∘ τ) = Ψ(σ) ▷ Ψ(τ)`. The image of a tree is the tree
//! itself plus same-degree trees of strictly larger total path length, since
//! every non-root graft pushes a subtree further from the root. That makes Ψ
//! invertible by a triangular solve.

use crate::coeff::Rational;
use crate::hopf::graft;
use crate::series::Series;
use crate::tree::{Forest, Tree};
use num_traits::One;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

fn psi_inverse_cache() -> &'static Mutex<HashMap<Tree, Arc<Series<Rational>>>> {
    static CACHE: OnceLock<Mutex<HashMap<Tree, Arc<Series<Rational>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Sum over all vertices of their distance to the root.
fn path_length(tree: &Tree) -> usize {
    tree.children()
        .iter()
        .map(|c| path_length(c) + c.degree())
        .sum()
}

/// Image of a tree under Ψ, as a combination of trees of the same degree.
pub fn psi(tree: &Tree) -> Series<Rational> {
    let order = tree.degree();
    if tree.children().is_empty() {
        return Series::from_tree(order, tree.clone());
    }
    // tree = c1 ∘ (rest with the same root label)
    let scion = &tree.children()[0];
    let rest = Tree::new(tree.label(), tree.children()[1..].to_vec());
    let left = psi(scion).truncated(order);
    let right = psi(&rest).truncated(order);
    graft(&left, &right)
}

/// Preimage of a tree under Ψ, by the triangular solve.
pub fn psi_inverse(tree: &Tree) -> Series<Rational> {
    if let Some(hit) = psi_inverse_cache().lock().unwrap().get(tree) {
        return (**hit).clone();
    }
    let order = tree.degree();
    let image = psi(tree);
    let own = Forest::single(tree.clone());
    assert!(
        image.coeff(&own).is_one(),
        "Psi is not unitriangular at {tree}"
    );
    let mut acc = Series::from_tree(order, tree.clone());
    for (forest, c) in image.terms() {
        if *forest == own {
            continue;
        }
        let deeper = &forest.trees()[0];
        assert!(
            path_length(deeper) > path_length(tree),
            "Psi image of {tree} contains {deeper} at the same path length"
        );
        acc = &acc - &psi_inverse(deeper).scale(c);
    }
    psi_inverse_cache()
        .lock()
        .unwrap()
        .insert(tree.clone(), Arc::new(acc.clone()));
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{butcher_product, enumerate_trees, Alphabet};

    fn t(s: &str) -> Tree {
        Tree::parse(s).unwrap()
    }

    fn single(s: &str) -> Series<Rational> {
        let tree = t(s);
        Series::from_tree(tree.degree(), tree)
    }

    #[test]
    fn psi_fixes_chains_and_spreads_branches() {
        assert_eq!(psi(&t("o")), single("o"));
        assert_eq!(psi(&t("o(o)")), single("o(o)"));
        assert_eq!(psi(&t("o(o(o))")), single("o(o(o))"));
        assert_eq!(psi(&t("o(o o)")), &single("o(o o)") + &single("o(o(o))"));
    }

    #[test]
    fn psi_off_diagonal_terms_are_strictly_deeper() {
        let alphabet = Alphabet::default();
        for degree in 1..=5 {
            for tree in enumerate_trees(&alphabet, degree) {
                let image = psi(&tree);
                let own = Forest::single(tree.clone());
                assert!(image.coeff(&own).is_one(), "diagonal of {tree}");
                for (forest, _) in image.terms() {
                    if *forest != own {
                        assert!(path_length(&forest.trees()[0]) > path_length(&tree));
                    }
                }
            }
        }
    }

    #[test]
    fn psi_inverse_round_trips_through_degree_four() {
        let alphabet = Alphabet::default();
        for degree in 1..=4 {
            for tree in enumerate_trees(&alphabet, degree) {
                let back = psi_inverse(&tree)
                    .terms()
                    .map(|(f, c)| {
                        psi(&f.trees()[0]).scale(c)
                    })
                    .fold(Series::zero(degree), |acc, s| &acc + &s);
                assert_eq!(back, Series::from_tree(degree, tree.clone()), "on {tree}");
            }
        }
    }

    #[test]
    fn psi_is_a_magma_morphism_in_low_degree() {
        let alphabet = Alphabet::default();
        for da in 1..=2 {
            for db in 1..=2 {
                for a in enumerate_trees(&alphabet, da) {
                    for b in enumerate_trees(&alphabet, db) {
                        let product = butcher_product(&a, &b);
                        let order = product.degree();
                        let lhs = psi(&product);
                        let rhs = graft(
                            &psi(&a).truncated(order),
                            &psi(&b).truncated(order),
                        );
                        assert_eq!(lhs, rhs, "on {a} and {b}");
                    }
                }
            }
        }
    }
}
