use serde::{Deserialize, Serialize};

use crate::chordal::DEFAULT_CLIQUE_TREE_BUDGET;
use crate::coloring::DEFAULT_COLORING_CAP;
use crate::iso::DEFAULT_ISO_CAP;

/// Size caps and search budgets shared by the expensive operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest graph handed to exact colouring.
    pub coloring_cap: usize,
    /// Largest graph handed to isomorphism testing.
    pub iso_cap: usize,
    /// Search steps allowed per clique-tree enumeration.
    pub clique_tree_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            coloring_cap: DEFAULT_COLORING_CAP,
            iso_cap: DEFAULT_ISO_CAP,
            clique_tree_budget: DEFAULT_CLIQUE_TREE_BUDGET,
        }
    }
}
