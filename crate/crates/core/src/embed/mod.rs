//! The two exact embeddings of Laakso graphs and their verifiers.

mod interval;
mod l1;
mod support;

pub use interval::IntervalSet;
pub use l1::{
    cross_branch_ratio_bound, l1_embed, resolution, verify_independence,
    verify_l1_distortion, IntervalEmbedding, ABSOLUTE_MAX_L1_LEVEL, DEFAULT_MAX_L1_LEVEL,
};
pub use support::{hamming, support_embed, verify_support_distortion, SupportEmbedding, SupportVector};

#[cfg(test)]
pub(crate) mod test_util {
    use crate::graph::{Anchor, BranchLabel, VertexAddress};

    /// All addresses of the vertex with the given canonical address in a
    /// level-`level` graph: the canonical one plus every one-step
    /// re-expansion of its terminal anchor through the gluing table.
    pub fn alias_addresses(level: u32, canonical: &VertexAddress) -> Vec<VertexAddress> {
        let mut out = vec![canonical.clone()];
        if canonical.path.len() as u32 == level {
            return out;
        }
        let expansions: &[(Anchor, &[(BranchLabel, Anchor)])] = &[
            (Anchor::A, &[(BranchLabel::Y, Anchor::A)]),
            (
                Anchor::T,
                &[
                    (BranchLabel::Y, Anchor::U),
                    (BranchLabel::C, Anchor::A),
                    (BranchLabel::D, Anchor::A),
                ],
            ),
            (Anchor::L, &[(BranchLabel::C, Anchor::U), (BranchLabel::E, Anchor::A)]),
            (Anchor::R, &[(BranchLabel::D, Anchor::U), (BranchLabel::F, Anchor::A)]),
            (
                Anchor::B,
                &[
                    (BranchLabel::E, Anchor::U),
                    (BranchLabel::F, Anchor::U),
                    (BranchLabel::Z, Anchor::A),
                ],
            ),
            (Anchor::U, &[(BranchLabel::Z, Anchor::U)]),
        ];
        for &(anchor, steps) in expansions {
            if canonical.terminal == anchor {
                for &(label, terminal) in steps {
                    let mut path = canonical.path.clone();
                    path.push(label);
                    out.push(VertexAddress::new(path, terminal));
                }
            }
        }
        out
    }
}
