//! Planar rooted trees and ordered forests.
//!
//! Trees are decorated, rooted and planar: the order of children matters.
//! A forest is an ordered sequence of trees; the empty forest is the unit of
//! concatenation and serializes as `1`.
//!
//! The serialization grammar is
//!
//! ```text
//! tree   := label [ "(" tree { " " tree } ")" ]
//! label  := [a-z][a-z0-9]*
//! forest := "1" | tree { " " tree }
//! ```
//!
//! Vertices of a tree are indexed in depth-first pre-order: the root is 0 and
//! children are visited left to right.

use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("vertex {index} out of range for a tree with {size} vertices")]
    InvalidVertex { index: usize, size: usize },
    #[error("invalid label {label:?}: {reason}")]
    InvalidLabel { label: String, reason: &'static str },
    #[error("duplicate label {label:?} in alphabet")]
    DuplicateLabel { label: String },
}

fn check_label(label: &str) -> Result<(), TreeError> {
    let mut chars = label.chars();
    let ok = match chars.next() {
        Some(c) if c.is_ascii_lowercase() => chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit()),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(TreeError::InvalidLabel {
            label: label.to_string(),
            reason: "labels match [a-z][a-z0-9]*",
        })
    }
}

/// Finite set of decoration labels, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(labels: I) -> Result<Alphabet, TreeError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out: Vec<String> = Vec::new();
        for label in labels {
            let label = label.into();
            check_label(&label)?;
            if out.contains(&label) {
                return Err(TreeError::DuplicateLabel { label });
            }
            out.push(label);
        }
        Ok(Alphabet { labels: out })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }
}

impl Default for Alphabet {
    /// The undecorated alphabet: the single label `o`.
    fn default() -> Self {
        Alphabet { labels: vec!["o".to_string()] }
    }
}

/// The label used for undecorated computations.
pub const UNDECORATED: &str = "o";

/// Planar rooted tree with a decoration label at every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    label: String,
    children: Vec<Tree>,
    degree: usize,
}

impl Tree {
    /// Builds a tree from a root label and an ordered list of branches.
    ///
    /// Panics if the label does not match the label grammar; labels from
    /// user input go through [`Tree::parse`] or [`Alphabet::new`] instead.
    pub fn new(label: impl Into<String>, children: Vec<Tree>) -> Tree {
        let label = label.into();
        if let Err(e) = check_label(&label) {
            panic!("{e}");
        }
        let degree = 1 + children.iter().map(Tree::degree).sum::<usize>();
        Tree { label, children, degree }
    }

    pub fn leaf(label: impl Into<String>) -> Tree {
        Tree::new(label, Vec::new())
    }

    /// The single undecorated vertex.
    pub fn dot() -> Tree {
        Tree::leaf(UNDECORATED)
    }

    /// Number of vertices.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        out.push_str(&self.label);
        if !self.children.is_empty() {
            out.push('(');
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                c.write(out);
            }
            out.push(')');
        }
    }

    pub fn parse(input: &str) -> Result<Tree, ParseError> {
        let mut cur = Cursor::new(input);
        let t = cur.tree()?;
        cur.finish()?;
        Ok(t)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.serialize())
    }
}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Tree {
    /// Canonical order: by degree first, then by serialized string.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.serialize().cmp(&other.serialize()))
    }
}

/// Ordered forest of planar trees. The empty forest is the algebra unit.
///
/// A forest carries its canonical serialization; comparisons and hashing go
/// through it, which also makes the canonical order cheap.
#[derive(Clone, Debug)]
pub struct Forest {
    trees: Vec<Tree>,
    degree: usize,
    key: String,
}

impl Forest {
    pub fn new(trees: Vec<Tree>) -> Forest {
        let degree = trees.iter().map(Tree::degree).sum();
        let key = if trees.is_empty() {
            "1".to_string()
        } else {
            let mut out = String::new();
            for (i, t) in trees.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                t.write(&mut out);
            }
            out
        };
        Forest { trees, degree, key }
    }

    /// The empty forest.
    pub fn unit() -> Forest {
        Forest::new(Vec::new())
    }

    pub fn single(tree: Tree) -> Forest {
        Forest::new(vec![tree])
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Total number of vertices.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn serialize(&self) -> &str {
        &self.key
    }

    /// Concatenation of forests; unit is the empty forest.
    pub fn concat(&self, other: &Forest) -> Forest {
        let mut trees = self.trees.clone();
        trees.extend(other.trees.iter().cloned());
        Forest::new(trees)
    }

    pub fn parse(input: &str) -> Result<Forest, ParseError> {
        if input == "1" {
            return Ok(Forest::unit());
        }
        let mut cur = Cursor::new(input);
        let mut trees = vec![cur.tree()?];
        while cur.peek() == Some(b' ') {
            cur.bump();
            trees.push(cur.tree()?);
        }
        cur.finish()?;
        Ok(Forest::new(trees))
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key)
    }
}

impl PartialEq for Forest {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for Forest {}

impl std::hash::Hash for Forest {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for Forest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Forest {
    /// Canonical order: by degree first, then by serialized string.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.key.cmp(&other.key))
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Cursor { bytes: input.as_bytes(), pos: 0 }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: message.into() })
    }

    fn label(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {}
            Some(c) => return self.err(format!("expected a label, found {:?}", c as char)),
            None => return self.err("expected a label, found end of input"),
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_lowercase() || c.is_ascii_digit() {
                self.bump();
            } else {
                break;
            }
        }
        Ok(std::str::from_utf8(&self.bytes[start..self.pos]).unwrap().to_string())
    }

    fn tree(&mut self) -> Result<Tree, ParseError> {
        let label = self.label()?;
        let mut children = Vec::new();
        if self.peek() == Some(b'(') {
            self.bump();
            children.push(self.tree()?);
            loop {
                match self.peek() {
                    Some(b' ') => {
                        self.bump();
                        children.push(self.tree()?);
                    }
                    Some(b')') => {
                        self.bump();
                        break;
                    }
                    Some(c) => return self.err(format!("expected ' ' or ')', found {:?}", c as char)),
                    None => return self.err("unclosed '('"),
                }
            }
        }
        Ok(Tree::new(label, children))
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected trailing input starting with {:?}", c as char)),
        }
    }
}

/// Left Butcher product: attaches `scion` as the leftmost branch at the root
/// of `stock`.
pub fn butcher_product(scion: &Tree, stock: &Tree) -> Tree {
    let mut children = Vec::with_capacity(1 + stock.children.len());
    children.push(scion.clone());
    children.extend(stock.children.iter().cloned());
    Tree::new(stock.label.clone(), children)
}

/// Attaches `scion` as the leftmost branch at vertex `v` of `stock`.
///
/// Vertices are numbered in depth-first pre-order starting from 0 at the root.
pub fn graft_at(scion: &Tree, stock: &Tree, v: usize) -> Result<Tree, TreeError> {
    if v >= stock.degree {
        return Err(TreeError::InvalidVertex { index: v, size: stock.degree });
    }
    Ok(graft_at_inner(scion, stock, v))
}

fn graft_at_inner(scion: &Tree, stock: &Tree, v: usize) -> Tree {
    if v == 0 {
        let mut children = Vec::with_capacity(1 + stock.children.len());
        children.push(scion.clone());
        children.extend(stock.children.iter().cloned());
        return Tree::new(stock.label.clone(), children);
    }
    let mut offset = 1;
    let mut children = stock.children.clone();
    for child in children.iter_mut() {
        if v - offset < child.degree {
            *child = graft_at_inner(scion, child, v - offset);
            return Tree::new(stock.label.clone(), children);
        }
        offset += child.degree;
    }
    unreachable!("vertex index checked against degree");
}

/// All single-vertex graftings of `scion` onto `stock`, one per vertex of
/// `stock` in pre-order. Repetitions are kept.
pub fn graft_all(scion: &Tree, stock: &Tree) -> Vec<Tree> {
    (0..stock.degree).map(|v| graft_at_inner(scion, stock, v)).collect()
}

/// Grafts a forest under a new root with the given label.
pub fn b_plus(forest: &Forest, label: impl Into<String>) -> Tree {
    Tree::new(label, forest.trees().to_vec())
}

/// Removes the root, returning the forest of its branches.
pub fn b_minus(tree: &Tree) -> Forest {
    Forest::new(tree.children.clone())
}

/// All trees with exactly `degree` vertices over the alphabet, in canonical
/// order.
pub fn enumerate_trees(alphabet: &Alphabet, degree: usize) -> Vec<Tree> {
    let mut out = trees_raw(alphabet, degree);
    out.sort();
    out
}

/// All forests with exactly `degree` vertices over the alphabet, in canonical
/// order.
pub fn enumerate_forests(alphabet: &Alphabet, degree: usize) -> Vec<Forest> {
    let mut out = forests_raw(alphabet, degree);
    out.sort();
    out
}

fn trees_raw(alphabet: &Alphabet, degree: usize) -> Vec<Tree> {
    if degree == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for branches in forests_raw(alphabet, degree - 1) {
        for label in alphabet.labels() {
            out.push(b_plus(&branches, label.clone()));
        }
    }
    out
}

fn forests_raw(alphabet: &Alphabet, degree: usize) -> Vec<Forest> {
    if degree == 0 {
        return vec![Forest::unit()];
    }
    let mut out = Vec::new();
    for first_degree in 1..=degree {
        for first in trees_raw(alphabet, first_degree) {
            for rest in forests_raw(alphabet, degree - first_degree) {
                let mut trees = vec![first.clone()];
                trees.extend(rest.trees().iter().cloned());
                out.push(Forest::new(trees));
            }
        }
    }
    out
}
