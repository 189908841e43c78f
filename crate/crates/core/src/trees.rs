//! Isomorphism classes of binary rooted trees.
//!
//! Trees are unordered: `node(F, G)` and `node(G, F)` are the same tree. Each
//! value is stored in a canonical planar presentation where the left child is
//! never smaller than the right one under `(leaf count, key)` order, which is
//! also the presentation used when evaluating tree operations.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Shape {
    Leaf,
    Node(Arc<BinaryTree>, Arc<BinaryTree>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryTree {
    shape: Shape,
    leaves: usize,
    key: String,
    aut: u64,
}

impl BinaryTree {
    pub fn leaf() -> Self {
        BinaryTree {
            shape: Shape::Leaf,
            leaves: 1,
            key: "*".to_string(),
            aut: 1,
        }
    }

    /// Joins two trees at a new root; child order is irrelevant.
    pub fn node(a: BinaryTree, b: BinaryTree) -> Self {
        let (l, r) = if a.order_key() >= b.order_key() { (a, b) } else { (b, a) };
        let aut = l.aut * r.aut * if l == r { 2 } else { 1 };
        BinaryTree {
            leaves: l.leaves + r.leaves,
            key: format!("({} {})", l.key, r.key),
            aut,
            shape: Shape::Node(Arc::new(l), Arc::new(r)),
        }
    }

    fn order_key(&self) -> (usize, &str) {
        (self.leaves, &self.key)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    pub fn internal_count(&self) -> usize {
        self.leaves - 1
    }

    /// Canonical form: `*` for a leaf, `(L R)` for a node.
    pub fn key(&self) -> &str {
        &self.key
    }

    /// Order of the automorphism group.
    pub fn aut_order(&self) -> u64 {
        self.aut
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.shape, Shape::Leaf)
    }

    /// Children in canonical planar order, `None` for a leaf.
    pub fn children(&self) -> Option<(&BinaryTree, &BinaryTree)> {
        match &self.shape {
            Shape::Leaf => None,
            Shape::Node(l, r) => Some((l, r)),
        }
    }

    /// Parses the canonical key syntax, e.g. `((* *) *)`.
    pub fn parse(s: &str) -> Result<Self> {
        fn rec(toks: &[&str], pos: &mut usize) -> Option<BinaryTree> {
            match *toks.get(*pos)? {
                "*" => {
                    *pos += 1;
                    Some(BinaryTree::leaf())
                }
                "(" => {
                    *pos += 1;
                    let a = rec(toks, pos)?;
                    let b = rec(toks, pos)?;
                    if toks.get(*pos) != Some(&")") {
                        return None;
                    }
                    *pos += 1;
                    Some(BinaryTree::node(a, b))
                }
                _ => None,
            }
        }
        let spaced = s.replace('(', " ( ").replace(')', " ) ");
        let toks: Vec<&str> = spaced.split_whitespace().collect();
        let mut pos = 0;
        match rec(&toks, &mut pos) {
            Some(t) if pos == toks.len() => Ok(t),
            _ => Err(Error::InvalidArgument(format!("not a tree: `{s}`"))),
        }
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}

type TreeCache = Mutex<HashMap<usize, Arc<Vec<BinaryTree>>>>;

fn cache() -> &'static TreeCache {
    static CACHE: OnceLock<TreeCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// One representative per isomorphism class of binary rooted trees with `k`
/// leaves, in a deterministic order (by split size of the root, then by the
/// order of the subtrees).
pub fn enumerate_trees(k: usize) -> Result<Arc<Vec<BinaryTree>>> {
    if k < 1 {
        return Err(Error::InvalidArgument("trees need at least one leaf".into()));
    }
    if let Some(v) = cache().lock().expect("tree cache poisoned").get(&k) {
        return Ok(v.clone());
    }
    let trees = if k == 1 {
        vec![BinaryTree::leaf()]
    } else {
        let mut out = Vec::new();
        // left subtree gets p >= k - p leaves
        for p in (k.div_ceil(2)..k).rev() {
            let lefts = enumerate_trees(p)?;
            let rights = enumerate_trees(k - p)?;
            for (i, f) in lefts.iter().enumerate() {
                for (j, g) in rights.iter().enumerate() {
                    if p == k - p && j > i {
                        continue;
                    }
                    out.push(BinaryTree::node(f.clone(), g.clone()));
                }
            }
        }
        out
    };
    let trees = Arc::new(trees);
    cache()
        .lock()
        .expect("tree cache poisoned")
        .entry(k)
        .or_insert_with(|| trees.clone());
    Ok(trees)
}

/// Order of the automorphism group of `t`.
pub fn aut_order(t: &BinaryTree) -> u64 {
    t.aut_order()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Brute force: every planar parenthesisation, deduplicated by canonical key.
    fn planar(k: usize) -> Vec<BinaryTree> {
        if k == 1 {
            return vec![BinaryTree::leaf()];
        }
        let mut out = Vec::new();
        for p in 1..k {
            for a in planar(p) {
                for b in planar(k - p) {
                    out.push(BinaryTree::node(a.clone(), b));
                }
            }
        }
        out
    }

    fn catalan(n: u64) -> u64 {
        crate::signs::binomial(2 * n, n) / (n + 1)
    }

    #[test]
    fn class_counts_match_brute_force() {
        let expected = [1usize, 1, 1, 2, 3, 6, 11];
        for k in 1..=7 {
            let trees = enumerate_trees(k).unwrap();
            assert_eq!(trees.len(), expected[k - 1], "k = {k}");
            let brute: HashSet<String> = planar(k).into_iter().map(|t| t.key).collect();
            assert_eq!(brute.len(), trees.len());
            let ours: HashSet<String> = trees.iter().map(|t| t.key.clone()).collect();
            assert_eq!(ours, brute);
        }
    }

    #[test]
    fn planar_presentations_sum_to_catalan() {
        for k in 1..=7u64 {
            let trees = enumerate_trees(k as usize).unwrap();
            let total: u64 = trees.iter().map(|t| (1u64 << (k - 1)) / t.aut_order()).sum();
            assert_eq!(total, catalan(k - 1), "k = {k}");
            for t in trees.iter() {
                assert_eq!((1u64 << (k - 1)) % t.aut_order(), 0);
            }
        }
    }

    #[test]
    fn aut_orders() {
        let leaf = BinaryTree::leaf();
        let cherry = BinaryTree::node(leaf.clone(), leaf.clone());
        assert_eq!(aut_order(&leaf), 1);
        assert_eq!(aut_order(&cherry), 2);
        let comb3 = BinaryTree::node(cherry.clone(), leaf.clone());
        assert_eq!(aut_order(&comb3), 2);
        let balanced = BinaryTree::node(cherry.clone(), cherry.clone());
        assert_eq!(aut_order(&balanced), 8);
        assert_eq!(BinaryTree::node(leaf.clone(), cherry.clone()), comb3);
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_trees(1).unwrap()[0].key(), "*");
        assert_eq!(enumerate_trees(2).unwrap()[0].key(), "(* *)");
        let four: Vec<String> = enumerate_trees(4).unwrap().iter().map(|t| t.key.clone()).collect();
        assert_eq!(four, vec!["(((* *) *) *)", "((* *) (* *))"]);
        assert!(enumerate_trees(0).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for k in 1..=6 {
            for t in enumerate_trees(k).unwrap().iter() {
                assert_eq!(&BinaryTree::parse(t.key()).unwrap(), t);
            }
        }
        assert_eq!(BinaryTree::parse("(* ((* *) *))").unwrap().key(), "(((* *) *) *)");
        assert!(BinaryTree::parse("(* *").is_err());
    }

    #[test]
    fn concurrent_callers_share_cache() {
        let handles: Vec<_> = (0..8)
            .map(|_| std::thread::spawn(|| enumerate_trees(6).unwrap().len()))
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), 6);
        }
    }
}
