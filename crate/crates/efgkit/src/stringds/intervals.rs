//! Set of disjoint integer intervals with contained-span queries.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntervalSetError {
    #[error("interval [{a}..{b}] overlaps stored interval [{with_a}..{with_b}]")]
    Overlap { a: usize, b: usize, with_a: usize, with_b: usize },
    #[error("interval [{a}..{b}] is not stored")]
    Missing { a: usize, b: usize },
}

struct Node {
    a: usize,
    b: usize,
    left: Option<Box<Node>>,
    right: Option<Box<Node>>,
    height: i32,
    // augmentations over the subtree, recomputed bottom-up on every change
    max_key: usize,
    span_sum: u64,
}

impl Node {
    fn new(a: usize, b: usize) -> Box<Node> {
        Box::new(Node { a, b, left: None, right: None, height: 1, max_key: a, span_sum: (b - a + 1) as u64 })
    }

    fn update(&mut self) {
        let (lh, ls, _) = side_stats(&self.left);
        let (rh, rs, rmax) = side_stats(&self.right);
        self.height = 1 + lh.max(rh);
        self.span_sum = ls + rs + (self.b - self.a + 1) as u64;
        self.max_key = rmax.unwrap_or(self.a);
    }

    fn balance(&self) -> i32 {
        let (lh, _, _) = side_stats(&self.left);
        let (rh, _, _) = side_stats(&self.right);
        lh - rh
    }
}

fn side_stats(n: &Option<Box<Node>>) -> (i32, u64, Option<usize>) {
    match n {
        Some(x) => (x.height, x.span_sum, Some(x.max_key)),
        None => (0, 0, None),
    }
}

fn rotate_right(mut root: Box<Node>) -> Box<Node> {
    let mut pivot = root.left.take().expect("rotate_right without left child");
    root.left = pivot.right.take();
    root.update();
    pivot.right = Some(root);
    pivot.update();
    pivot
}

fn rotate_left(mut root: Box<Node>) -> Box<Node> {
    let mut pivot = root.right.take().expect("rotate_left without right child");
    root.right = pivot.left.take();
    root.update();
    pivot.left = Some(root);
    pivot.update();
    pivot
}

fn rebalance(mut node: Box<Node>) -> Box<Node> {
    node.update();
    let bal = node.balance();
    if bal > 1 {
        if node.left.as_ref().unwrap().balance() < 0 {
            node.left = Some(rotate_left(node.left.take().unwrap()));
        }
        return rotate_right(node);
    }
    if bal < -1 {
        if node.right.as_ref().unwrap().balance() > 0 {
            node.right = Some(rotate_right(node.right.take().unwrap()));
        }
        return rotate_left(node);
    }
    node
}

/// Balanced search tree over disjoint closed intervals `[a..b]`, keyed by the
/// left endpoint. `span` reports how much of a query range is covered by
/// stored intervals that lie entirely inside it.
#[derive(Default)]
pub struct IntervalUnionSet {
    root: Option<Box<Node>>,
    len: usize,
}

impl IntervalUnionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Total length covered by all stored intervals.
    pub fn total_span(&self) -> u64 {
        self.root.as_ref().map_or(0, |r| r.span_sum)
    }

    pub fn insert(&mut self, a: usize, b: usize) -> Result<(), IntervalSetError> {
        assert!(a <= b, "interval [{a}..{b}] is reversed");
        if let Some((pa, pb)) = self.pred(a) {
            if pb >= a {
                return Err(IntervalSetError::Overlap { a, b, with_a: pa, with_b: pb });
            }
        }
        if let Some((sa, sb)) = self.succ(a) {
            if sa <= b {
                return Err(IntervalSetError::Overlap { a, b, with_a: sa, with_b: sb });
            }
        }
        self.root = Some(insert_rec(self.root.take(), a, b));
        self.len += 1;
        Ok(())
    }

    pub fn delete(&mut self, a: usize, b: usize) -> Result<(), IntervalSetError> {
        match self.lookup(a) {
            Some(stored_b) if stored_b == b => {}
            _ => return Err(IntervalSetError::Missing { a, b }),
        }
        self.root = delete_rec(self.root.take(), a);
        self.len -= 1;
        Ok(())
    }

    /// Total length of stored intervals fully contained in `[lo..hi]`.
    pub fn span(&self, lo: usize, hi: usize) -> u64 {
        assert!(lo <= hi, "span range [{lo}..{hi}] is reversed");
        let mut sum = range_key_sum(&self.root, lo, hi);
        if let Some((a, b)) = max_key_in_range(&self.root, lo, hi) {
            // only the interval with the largest key in range can poke out
            if b > hi {
                sum -= (b - a + 1) as u64;
            }
        }
        sum
    }

    /// Stored intervals fully contained in `[lo..hi]`, in key order.
    pub fn contained(&self, lo: usize, hi: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        collect_in_range(&self.root, lo, hi, &mut out);
        out.retain(|&(_, b)| b <= hi);
        out
    }

    pub fn iter_all(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        collect_in_range(&self.root, 0, usize::MAX, &mut out);
        out
    }

    fn lookup(&self, key: usize) -> Option<usize> {
        let mut cur = self.root.as_deref();
        while let Some(n) = cur {
            if key == n.a {
                return Some(n.b);
            }
            cur = if key < n.a { n.left.as_deref() } else { n.right.as_deref() };
        }
        None
    }

    // interval with the largest key <= key
    fn pred(&self, key: usize) -> Option<(usize, usize)> {
        let mut best = None;
        let mut cur = self.root.as_deref();
        while let Some(n) = cur {
            if n.a <= key {
                best = Some((n.a, n.b));
                cur = n.right.as_deref();
            } else {
                cur = n.left.as_deref();
            }
        }
        best
    }

    // interval with the smallest key > key
    fn succ(&self, key: usize) -> Option<(usize, usize)> {
        let mut best = None;
        let mut cur = self.root.as_deref();
        while let Some(n) = cur {
            if n.a > key {
                best = Some((n.a, n.b));
                cur = n.left.as_deref();
            } else {
                cur = n.right.as_deref();
            }
        }
        best
    }
}

fn insert_rec(node: Option<Box<Node>>, a: usize, b: usize) -> Box<Node> {
    match node {
        None => Node::new(a, b),
        Some(mut n) => {
            if a < n.a {
                n.left = Some(insert_rec(n.left.take(), a, b));
            } else {
                n.right = Some(insert_rec(n.right.take(), a, b));
            }
            rebalance(n)
        }
    }
}

fn delete_rec(node: Option<Box<Node>>, key: usize) -> Option<Box<Node>> {
    let mut n = node?;
    if key < n.a {
        n.left = delete_rec(n.left.take(), key);
    } else if key > n.a {
        n.right = delete_rec(n.right.take(), key);
    } else {
        match (n.left.take(), n.right.take()) {
            (None, r) => return r,
            (l, None) => return l,
            (l, Some(r)) => {
                let (min_node, rest) = pop_min(r);
                let mut replacement = min_node;
                replacement.left = l;
                replacement.right = rest;
                return Some(rebalance(replacement));
            }
        }
    }
    Some(rebalance(n))
}

fn pop_min(mut node: Box<Node>) -> (Box<Node>, Option<Box<Node>>) {
    match node.left.take() {
        None => {
            let right = node.right.take();
            (node, right)
        }
        Some(left) => {
            let (min_node, rest) = pop_min(left);
            node.left = rest;
            (min_node, Some(rebalance(node)))
        }
    }
}

fn range_key_sum(node: &Option<Box<Node>>, lo: usize, hi: usize) -> u64 {
    let Some(n) = node else { return 0 };
    if n.max_key < lo {
        return 0;
    }
    if lo == 0 && n.max_key <= hi {
        return n.span_sum;
    }
    let mut sum = 0;
    if n.a >= lo {
        sum += range_key_sum(&n.left, lo, hi);
        if n.a <= hi {
            sum += (n.b - n.a + 1) as u64;
        }
    }
    if n.a <= hi {
        sum += range_key_sum(&n.right, lo, hi);
    }
    sum
}

fn max_key_in_range(node: &Option<Box<Node>>, lo: usize, hi: usize) -> Option<(usize, usize)> {
    let mut best = None;
    let mut cur = node.as_deref();
    while let Some(n) = cur {
        if n.a > hi {
            cur = n.left.as_deref();
        } else {
            if n.a >= lo {
                best = Some((n.a, n.b));
            }
            cur = n.right.as_deref();
        }
    }
    best
}

fn collect_in_range(node: &Option<Box<Node>>, lo: usize, hi: usize, out: &mut Vec<(usize, usize)>) {
    let Some(n) = node else { return };
    if n.a >= lo {
        collect_in_range(&n.left, lo, hi, out);
        if n.a <= hi {
            out.push((n.a, n.b));
        }
    }
    if n.a <= hi {
        collect_in_range(&n.right, lo, hi, out);
    }
}
