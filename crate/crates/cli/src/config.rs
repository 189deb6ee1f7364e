//! Command line definition. The parsed command line doubles as the
//! experiment configuration: it serializes to JSON, `run` replays it, and its
//! hash is stamped on every report.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperperc::tiling::DEFAULT_VERTEX_BUDGET;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Parser, Serialize, Deserialize)]
#[command(name = "hyperperc", version, about = "Hyperbolic tilings, embedded trees and site percolation experiments")]
pub struct Config {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct Global {
    /// Base seed for all random streams.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Maximum number of vertices a generated tiling may have.
    #[arg(long, global = true, default_value_t = DEFAULT_VERTEX_BUDGET)]
    pub budget: usize,
    /// Where the main JSON result goes (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write this configuration as JSON, for `run`.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub save_config: Option<PathBuf>,
}

/// Graph source shared by most subcommands.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct GraphArgs {
    /// Graph file written by `generate`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Tiling `p,q,radius` to generate when no graph file is given.
    #[arg(long, default_value = "3,7,8")]
    pub tiling: String,
    /// Accept flat or spherical parameters, e.g. the `{4,4}` control.
    #[arg(long)]
    pub allow_non_hyperbolic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum AdjacencyArg {
    Graph,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum TwoPointArg {
    /// `u ↔ v` in `G`.
    Points,
    /// `u ↔ v` in `G*`.
    Star,
    /// `∂*u ↔ ∂*v` in `G*`.
    StarBoundaries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum DecayArg {
    Points,
    StarBoundaries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum MethodArg {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
pub enum Command {
    /// Generate a ball of the {p,q} tiling and write it as JSON.
    Generate {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        allow_non_hyperbolic: bool,
        /// Include the star edges of the matching graph.
        #[arg(long)]
        star_edges: bool,
    },
    /// Follow a turn-rule walk.
    Walk {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        from: u32,
        /// Second vertex of the start edge (default: first neighbour).
        #[arg(long)]
        to: Option<u32>,
        /// `+3`, `-3`, `+2`, or `L<k>` / `R<k>`.
        #[arg(long, default_value = "+3", allow_hyphen_values = true)]
        rule: String,
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Grow the embedded degree 3/4 tree.
    Tree {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        root: u32,
        #[arg(long, default_value_t = 0)]
        slot: usize,
        /// Degree condition, 1 or 2.
        #[arg(long, default_value = "1")]
        condition: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Build one chandelier, or the alternating sequence along a geodesic
    /// from `--from` to `--to`.
    Chandelier {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        root: Option<u32>,
        #[arg(long)]
        v1: Option<u32>,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        #[arg(long)]
        from: Option<u32>,
        #[arg(long)]
        to: Option<u32>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Summarize the matching graph.
    Matching {
        #[command(flatten)]
        graph: GraphArgs,
        /// List every star edge.
        #[arg(long)]
        list: bool,
    },
    /// Count clusters crossing from the core ball to the boundary.
    Percolate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 2)]
        core_radius: u32,
        #[arg(long, value_enum, default_value_t = AdjacencyArg::Graph)]
        adjacency: AdjacencyArg,
        /// CSV with one row per sample and state.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Estimate a two-point connection probability.
    TwoPoint {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        u: u32,
        #[arg(long)]
        v: u32,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, value_enum, default_value_t = TwoPointArg::Points)]
        variant: TwoPointArg,
    },
    /// Fit exponential decay of the two-point function in G* distance.
    Decay {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: f64,
        /// `auto`, or `u-v,u-v,...` at increasing G* distance.
        #[arg(long, default_value = "auto")]
        pairs: String,
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
        #[arg(long, value_enum, default_value_t = DecayArg::Points)]
        variant: DecayArg,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Evaluate φ on the ball B(v, radius).
    Phi {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        v: u32,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        #[arg(long, default_value_t = 20_000)]
        samples: u64,
    },
    /// Search for a ball with φ ≤ 1 − ε around each vertex of a core ball.
    Certify {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        v: u32,
        /// Certify every vertex within this distance of `v`.
        #[arg(long, default_value_t = 0)]
        core_radius: u32,
        #[arg(long, default_value_t = 4)]
        max_radius: usize,
        #[arg(long, default_value_t = hyperperc::critical::DEFAULT_CERTIFICATE_EPSILON)]
        epsilon: f64,
    },
    /// Outer boundaries of the finite closed *-clusters of one sample.
    Contour {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0.7)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        sample: u64,
    },
    /// Draw the tiling, optionally with a tree and a chandelier.
    Render {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long)]
        tree_depth: Option<usize>,
        #[arg(long)]
        chandelier: Option<u32>,
    },
    /// Replay a configuration saved with `--save-config`.
    Run { config: PathBuf },
}

impl Config {
    /// First 16 hex digits of the SHA-256 of the JSON configuration.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_thread_count() {
        let a = Config::parse_from(["hyperperc", "percolate", "--p", "0.5", "--threads", "2"]);
        let b = Config::parse_from(["hyperperc", "percolate", "--p", "0.5"]);
        assert_eq!(a.hash(), b.hash());
        let c = Config::parse_from(["hyperperc", "percolate", "--p", "0.6"]);
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn config_round_trips() {
        let a = Config::parse_from(["hyperperc", "--seed", "9", "decay", "--p", "0.5", "--samples", "10"]);
        let text = serde_json::to_string(&a).unwrap();
        let b: Config = serde_json::from_str(&text).unwrap();
        assert_eq!(a.hash(), b.hash());
    }
}
