use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Topological type of a point of a planar field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassificationLabel {
    Saddle,
    StableNode,
    UnstableNode,
    ImproperNodeStable,
    ImproperNodeUnstable,
    StableFocus,
    UnstableFocus,
    Center,
    FocusOrCenter,
    SaddleNode,
    Cusp,
    EllipticDomainPoint,
    DegenerateUnresolved,
    NonSingular,
}

use ClassificationLabel::*;

impl ClassificationLabel {
    pub const ALL: [ClassificationLabel; 14] = [
        Saddle,
        StableNode,
        UnstableNode,
        ImproperNodeStable,
        ImproperNodeUnstable,
        StableFocus,
        UnstableFocus,
        Center,
        FocusOrCenter,
        SaddleNode,
        Cusp,
        EllipticDomainPoint,
        DegenerateUnresolved,
        NonSingular,
    ];

    /// Poincare index of an isolated point of this type.
    pub fn table_index(self) -> Option<i64> {
        match self {
            Saddle => Some(-1),
            StableNode | UnstableNode | ImproperNodeStable | ImproperNodeUnstable | StableFocus
            | UnstableFocus | Center | FocusOrCenter | EllipticDomainPoint => Some(1),
            SaddleNode | Cusp => Some(0),
            DegenerateUnresolved | NonSingular => None,
        }
    }

    /// Both Jacobian eigenvalues have nonzero real part.
    pub fn is_hyperbolic(self) -> bool {
        matches!(
            self,
            Saddle
                | StableNode
                | UnstableNode
                | ImproperNodeStable
                | ImproperNodeUnstable
                | StableFocus
                | UnstableFocus
        )
    }

    pub fn is_node(self) -> bool {
        matches!(
            self,
            StableNode | UnstableNode | ImproperNodeStable | ImproperNodeUnstable
        )
    }

    pub fn is_focus(self) -> bool {
        matches!(self, StableFocus | UnstableFocus)
    }

    /// Short kebab-case name used on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            Saddle => "saddle",
            StableNode => "stable-node",
            UnstableNode => "unstable-node",
            ImproperNodeStable => "improper-node-stable",
            ImproperNodeUnstable => "improper-node-unstable",
            StableFocus => "stable-focus",
            UnstableFocus => "unstable-focus",
            Center => "center",
            FocusOrCenter => "focus-or-center",
            SaddleNode => "saddle-node",
            Cusp => "cusp",
            EllipticDomainPoint => "elliptic",
            DegenerateUnresolved => "degenerate",
            NonSingular => "non-singular",
        }
    }
}

impl fmt::Display for ClassificationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown singular point label '{0}'")]
pub struct UnknownLabel(pub String);

impl FromStr for ClassificationLabel {
    type Err = UnknownLabel;

    /// Accepts the variant name, its kebab-case form, and the generic
    /// shorthands `node`, `focus` and `improper-node`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        let generic = match key.as_str() {
            "node" => Some(UnstableNode),
            "focus" => Some(UnstableFocus),
            "improper-node" => Some(ImproperNodeUnstable),
            "elliptic-domain-point" | "elliptic-domain" => Some(EllipticDomainPoint),
            "saddlenode" => Some(SaddleNode),
            _ => None,
        };
        if let Some(l) = generic {
            return Ok(l);
        }
        Self::ALL
            .into_iter()
            .find(|l| {
                l.cli_name() == key || format!("{l:?}").to_ascii_lowercase() == key.replace('-', "")
            })
            .ok_or_else(|| UnknownLabel(s.to_string()))
    }
}
