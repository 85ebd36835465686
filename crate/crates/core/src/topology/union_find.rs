/// Disjoint sets over `0..len` with path halving and union by size.
pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    #[inline]
    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    #[inline]
    pub fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }

    /// Consumes the structure, returning for each element a dense label
    /// numbered in order of first appearance.
    pub fn into_labels(mut self) -> (Vec<u32>, u32) {
        let len = self.parent.len();
        // the size array is no longer needed; reuse it as root -> label
        let mut root_label = std::mem::take(&mut self.size);
        root_label.fill(u32::MAX);
        let mut labels = Vec::with_capacity(len);
        let mut next = 0u32;
        for x in 0..len as u32 {
            let r = self.find(x) as usize;
            if root_label[r] == u32::MAX {
                root_label[r] = next;
                next += 1;
            }
            labels.push(root_label[r]);
        }
        (labels, next)
    }
}
