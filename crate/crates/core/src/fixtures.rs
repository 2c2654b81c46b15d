//! Graph files used by tests, benches and the acceptance suite.

/// E8 chain of `-2` vertices with a `-3` vertex `j0` glued to one end.
pub const E8_TAIL: &str = "\
a1: -2
a2: -2
a3: -2
a4: -2
a5: -2
a6: -2
a7: -2
j0: -3
b: -2
edges:
a1 a2
a2 a3
a3 a4
a4 a5
a5 a6
a6 a7
a7 j0
a3 b
";

/// The E8 graph, i.e. the previous graph with `j0` removed.
pub const E8: &str = "\
a1: -2
a2: -2
a3: -2
a4: -2
a5: -2
a6: -2
a7: -2
b: -2
edges:
a1 a2
a2 a3
a3 a4
a4 a5
a5 a6
a6 a7
a3 b
";

pub const MINUS_ONE: &str = "v0: -1\nedges:\n";
pub const PLUS_ONE: &str = "v0: 1\nedges:\n";
pub const MINUS_TWO: &str = "v0: -2\nedges:\n";

/// Star with a `-1` centre and legs `-2`, `-3`, `-7`.
pub const STAR_2_3_7: &str = "\
c: -1
x: -2
y: -3
z: -7
edges:
c x
c y
c z
";
