use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::SubgroupLattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeetIrreducibleEntry {
    pub order: usize,
    pub class_size: usize,
    pub unique_cover_order: usize,
}

/// Machine-readable width summary of a lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub group_spec: String,
    pub order: usize,
    pub subgroup_count: usize,
    pub class_count: usize,
    pub width: usize,
    pub meet_irreducible_classes: Vec<MeetIrreducibleEntry>,
}

impl LatticeReport {
    pub fn new(lattice: &SubgroupLattice) -> Self {
        let report = lattice.meet_irreducibles();
        let meet_irreducible_classes = report
            .classes
            .iter()
            .map(|c| MeetIrreducibleEntry {
                order: lattice.subgroup(c.representative).order(),
                class_size: lattice.conjugacy_classes()[c.class].len(),
                unique_cover_order: lattice.subgroup(c.unique_cover).order(),
            })
            .collect();
        LatticeReport {
            group_spec: lattice.group().family().to_string(),
            order: lattice.group().order(),
            subgroup_count: lattice.len(),
            class_count: lattice.conjugacy_classes().len(),
            width: report.width,
            meet_irreducible_classes,
        }
    }
}

/// Extra class-level edges drawn on top of the Hasse diagram.
#[derive(Clone, Debug, Default)]
pub struct DotOverlay {
    /// `(source class, target class, label)`.
    pub arrows: Vec<(usize, usize, String)>,
}

/// Class-level Hasse diagram in DOT format. Classes of equal subgroup order
/// share a rank; meet-irreducible classes are double-circled.
pub fn hasse_dot(lattice: &SubgroupLattice, overlay: Option<&DotOverlay>) -> String {
    let classes = lattice.conjugacy_classes();
    let flagged: Vec<bool> = classes
        .iter()
        .map(|c| lattice.is_meet_irreducible(c[0]))
        .collect();

    let mut edges = std::collections::BTreeSet::new();
    for (ci, members) in classes.iter().enumerate() {
        for &h in members {
            for &k in lattice.upper_covers(h) {
                edges.insert((ci, lattice.class_of(k)));
            }
        }
    }

    let mut by_order: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ci, members) in classes.iter().enumerate() {
        by_order.entry(lattice.subgroup(members[0]).order()).or_default().push(ci);
    }

    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", lattice.group().family());
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=circle];");
    for (ci, members) in classes.iter().enumerate() {
        let shape = if flagged[ci] { "doublecircle" } else { "circle" };
        let _ = writeln!(
            out,
            "  n{ci} [label=\"order={}, size={}\", shape={shape}];",
            lattice.subgroup(members[0]).order(),
            members.len()
        );
    }
    for nodes in by_order.values() {
        let ids: Vec<String> = nodes.iter().map(|c| format!("n{c}")).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", ids.join("; "));
    }
    for (a, b) in &edges {
        let _ = writeln!(out, "  n{a} -> n{b} [color=grey, arrowhead=none];");
    }
    if let Some(overlay) = overlay {
        for (a, b, label) in &overlay.arrows {
            let _ = writeln!(
                out,
                "  n{a} -> n{b} [color=red, constraint=false, label=\"{label}\"];"
            );
        }
    }
    out.push_str("}\n");
    out
}
