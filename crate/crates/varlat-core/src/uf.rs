//! Union-find with path compression, used by the congruence closures.

use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    pub fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    /// Merges the classes of `a` and `b`; returns true when they were distinct.
    /// The smaller root index is kept as the representative, so class
    /// representatives are stable under insertion order.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop as usize] = keep;
        true
    }

    /// Relabels classes as consecutive ids in order of first appearance.
    pub fn class_labels(&mut self) -> (Vec<u32>, usize) {
        let n = self.parent.len();
        let mut label = Vec::with_capacity(n);
        let mut root_label: alloc::collections::BTreeMap<u32, u32> = alloc::collections::BTreeMap::new();
        let mut next = 0u32;
        for i in 0..n as u32 {
            let r = self.find(i);
            let l = *root_label.entry(r).or_insert_with(|| {
                let l = next;
                next += 1;
                l
            });
            label.push(l);
        }
        (label, next as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 3));
        assert!(!uf.union(3, 0));
        assert!(uf.union(3, 4));
        assert_eq!(uf.find(4), uf.find(0));
        assert_ne!(uf.find(1), uf.find(0));
        let (labels, count) = uf.class_labels();
        assert_eq!(count, 3);
        assert_eq!(labels[0], labels[3]);
        assert_eq!(labels[0], labels[4]);
        assert_eq!(labels[1], 1);
    }
}
