use super::network::ContactNetwork;

/// Disjoint-set forest with union by size and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        true
    }

    pub fn component_size(&mut self, x: u32) -> usize {
        let r = self.find(x);
        self.size[r as usize] as usize
    }
}

/// Connected components of a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Component index per node. Components are numbered by descending
    /// size, ties broken by the smaller minimum node id.
    pub label: Vec<u32>,
    /// Size of each component, descending.
    pub sizes: Vec<usize>,
}

pub fn connected_components(net: &ContactNetwork) -> Components {
    let n = net.node_count();
    let mut uf = UnionFind::new(n);
    for (u, v) in net.edges() {
        uf.union(u, v);
    }
    // Roots in order of first appearance are ordered by their minimum node id.
    let mut root_slot = vec![u32::MAX; n];
    let mut raw: Vec<(usize, u32)> = Vec::new();
    for node in 0..n as u32 {
        let root = uf.find(node) as usize;
        if root_slot[root] == u32::MAX {
            root_slot[root] = raw.len() as u32;
            raw.push((uf.component_size(node), node));
        }
    }
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| raw[b].0.cmp(&raw[a].0).then(raw[a].1.cmp(&raw[b].1)));
    let mut rank = vec![0u32; raw.len()];
    for (r, &slot) in order.iter().enumerate() {
        rank[slot] = r as u32;
    }
    let label = (0..n as u32)
        .map(|node| rank[root_slot[uf.find(node) as usize] as usize])
        .collect();
    let sizes = order.iter().map(|&slot| raw[slot].0).collect();
    Components { label, sizes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::NetworkKind;

    #[test]
    fn ranks_by_size_then_min_id() {
        // {0,1}, {2,3,4}, {5,6}, {7}
        let net = ContactNetwork::from_edges(
            8,
            NetworkKind::ErdosRenyi,
            &[(0, 1), (2, 3), (3, 4), (5, 6)],
        )
        .unwrap();
        let comps = connected_components(&net);
        assert_eq!(comps.sizes, vec![3, 2, 2, 1]);
        assert_eq!(comps.label, vec![1, 1, 0, 0, 0, 2, 2, 3]);
    }

    #[test]
    fn union_find_sizes() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(0, 1));
        assert!(uf.union(3, 1));
        assert!(!uf.union(0, 3));
        assert_eq!(uf.component_size(3), 3);
        assert_eq!(uf.component_size(4), 1);
    }
}
