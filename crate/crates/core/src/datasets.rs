//! Small bundled graphs.

use crate::graph::{parse_edge_list_str, SparseGraph};

const KARATE: &str = include_str!("../data/karate.edges");

/// Zachary's karate club, node ids 0..33 (0 and 33 are the two instructors).
pub fn karate() -> SparseGraph {
    let parsed = parse_edge_list_str(KARATE).expect("bundled karate edge list parses");
    // index by label rather than by first appearance
    let edges: Vec<(u32, u32)> = parsed.edges().map(|(a, b)| (parsed.label(a as usize) as u32, parsed.label(b as usize) as u32)).collect();
    SparseGraph::from_edges(parsed.n(), &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn karate_instructors_are_nodes_0_and_33() {
        let g = karate();
        assert_eq!((g.n(), g.m()), (34, 78));
        assert!((0..34).all(|i| g.label(i) == i as u64));
        assert_eq!((g.degree(0), g.degree(33)), (16, 17));
        assert!(!g.has_edge(0, 33));
    }
}
