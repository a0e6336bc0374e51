use super::FiniteGraph;

/// The cycle `C_n`: vertices `v0..v{n-1}`, edge `e{i}` from `v{i}` to
/// `v{i+1 mod n}`. `C_1` is a single loop.
pub fn cycle(n: usize) -> FiniteGraph {
    assert!(n >= 1, "cycle needs at least one vertex");
    let vertices = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (0..n).map(|i| (format!("e{i}"), i, (i + 1) % n)).collect();
    FiniteGraph::from_edges(Some(format!("C{n}")), vertices, edges)
        .expect("cycle ids are distinct")
}

/// The bouquet `B_r`: one vertex `v0` with loops `x0..x{r-1}`.
pub fn bouquet(r: usize) -> FiniteGraph {
    let edges = (0..r).map(|i| (format!("x{i}"), 0, 0)).collect();
    FiniteGraph::from_edges(Some(format!("B{r}")), vec!["v0".to_owned()], edges)
        .expect("bouquet ids are distinct")
}

/// The path `P_n` on `n` vertices with edges `e{i}: v{i} -> v{i+1}`.
pub fn path(n: usize) -> FiniteGraph {
    assert!(n >= 1, "path needs at least one vertex");
    let vertices = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (0..n - 1).map(|i| (format!("e{i}"), i, i + 1)).collect();
    FiniteGraph::from_edges(Some(format!("P{n}")), vertices, edges)
        .expect("path ids are distinct")
}

/// Disjoint union; ids of the left copy are prefixed `0.`, the right `1.`.
pub fn disjoint_union(a: &FiniteGraph, b: &FiniteGraph) -> FiniteGraph {
    let mut vertices = Vec::with_capacity(a.vertex_count() + b.vertex_count());
    let mut edges = Vec::with_capacity(a.edge_count() + b.edge_count());
    for (tag, g, offset) in [("0", a, 0), ("1", b, a.vertex_count())] {
        vertices.extend(g.vertex_ids().iter().map(|v| format!("{tag}.{v}")));
        for e in 0..g.edge_count() {
            let d = super::Dart::from_edge(e, false);
            edges.push((
                format!("{tag}.{}", g.edge_id(e)),
                g.src(d).0 + offset,
                g.dst(d).0 + offset,
            ));
        }
    }
    let name = format!(
        "{}+{}",
        a.name().unwrap_or("G"),
        b.name().unwrap_or("G")
    );
    FiniteGraph::from_edges(Some(name), vertices, edges).expect("prefixed ids are distinct")
}
