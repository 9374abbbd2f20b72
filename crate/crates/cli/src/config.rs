//! Experiment configuration and the named presets.

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Result};
use clap::ValueEnum;
use ricci_mesh::manifolds::{build_flat, build_gowdy, build_nil, build_perturbed, build_torus4};
use ricci_mesh::{BlockKind, ManifoldBuild};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    Nil,
    Gowdy,
    Torus4,
    Perturbed,
    Flat,
}

impl Manifold {
    /// Default `(dt, steps)` for the family.
    pub fn schedule(self) -> (f64, usize) {
        match self {
            Manifold::Nil => (0.005, 120),
            Manifold::Gowdy => (0.02, 35),
            Manifold::Torus4 => (0.05, 80),
            Manifold::Perturbed => (0.002, 50),
            Manifold::Flat => (0.01, 100),
        }
    }
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Manifold::Nil => "nil",
            Manifold::Gowdy => "gowdy",
            Manifold::Torus4 => "torus4",
            Manifold::Perturbed => "perturbed",
            Manifold::Flat => "flat",
        };
        f.write_str(s)
    }
}

/// Block counts written `N`, `AxB` or `AxBxC`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid(pub Vec<usize>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(['x', 'X']).collect();
        if parts.len() > 3 {
            return Err(format!("grid `{s}` has more than three factors"));
        }
        let counts = parts
            .iter()
            .map(|p| match p.trim().parse::<usize>() {
                Ok(0) | Err(_) => Err(format!("grid `{s}` must be positive integers joined by `x`")),
                Ok(n) => Ok(n),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Grid(counts))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|n| n.to_string()).collect();
        f.write_str(&parts.join("x"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub manifold: Manifold,
    pub block: BlockKind,
    pub grid: Grid,
    /// Nil twist; ignored elsewhere.
    pub lambda: f64,
    pub normalized: bool,
    pub dt: f64,
    pub steps: usize,
    pub stride: usize,
    /// Seeds the Monte-Carlo checks only.
    pub seed: u64,
    pub preset: Option<String>,
}

impl ExperimentConfig {
    /// A config on the family's default schedule.
    pub fn new(manifold: Manifold, block: BlockKind, grid: Grid) -> Self {
        let (dt, steps) = manifold.schedule();
        Self {
            manifold,
            block,
            grid,
            lambda: 1.0,
            normalized: false,
            dt,
            steps,
            stride: 1,
            seed: 0,
            preset: None,
        }
    }

    /// Short label such as `torus4-diamond-4x5`.
    pub fn label(&self) -> String {
        match &self.preset {
            Some(p) => p.clone(),
            None => format!("{}-{}-{}", self.manifold, self.block, self.grid),
        }
    }

    fn single(&self) -> Result<usize> {
        match self.grid.0.as_slice() {
            [n] => Ok(*n),
            [n, rest @ ..] if rest.iter().all(|m| m == n) && self.grid.0.len() == 3 => Ok(*n),
            _ => bail!("{} grids take a single block count, got `{}`", self.manifold, self.grid),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            bail!("dt must be positive, got {}", self.dt);
        }
        if self.steps == 0 || self.stride == 0 {
            bail!("steps and stride must be at least 1");
        }
        match self.manifold {
            Manifold::Nil if self.block != BlockKind::Cubic => bail!("nil grids use cubic blocks only"),
            Manifold::Torus4 if self.grid.0.len() != 2 => {
                bail!("torus4 grids are `NTHETAxNPHI`, got `{}`", self.grid)
            }
            Manifold::Torus4 => Ok(()),
            _ => self.single().map(|_| ()),
        }
    }

    pub fn build(&self) -> Result<ManifoldBuild> {
        self.validate()?;
        let build = match self.manifold {
            Manifold::Nil => build_nil(self.single()?, self.lambda)?,
            Manifold::Gowdy => build_gowdy(self.block, self.single()?)?,
            Manifold::Torus4 => build_torus4(self.block, [self.grid.0[0], self.grid.0[1]])?,
            Manifold::Perturbed => build_perturbed(self.block, self.single()?)?,
            Manifold::Flat => build_flat(self.block, self.single()?)?,
        };
        Ok(build)
    }

    /// Same grid and flow settings, ignoring output and seed.
    fn same_run(&self, other: &Self) -> bool {
        let nil_match = self.manifold != Manifold::Nil || (self.lambda == other.lambda);
        self.manifold == other.manifold
            && self.block == other.block
            && self.grid == other.grid
            && self.normalized == other.normalized
            && nil_match
    }

    /// Fills the schedule from the matching named preset.
    pub fn into_paper_preset(self) -> Result<Self> {
        match presets().into_iter().find(|p| p.same_run(&self)) {
            Some(p) => Ok(Self { seed: self.seed, ..p }),
            None => bail!(
                "no preset matches {} (see `ricci-mesh presets`)",
                self.label()
            ),
        }
    }
}

/// Every named preset, in table order.
pub fn presets() -> Vec<ExperimentConfig> {
    let mut out = Vec::new();
    let mut push = |name: String, mut c: ExperimentConfig| {
        c.preset = Some(name);
        out.push(c);
    };
    for (suffix, lambda, normalized) in [("normalized", 1.0, true), ("nonnormalized", -2.0, false)] {
        for n in 1..=3 {
            let mut c = ExperimentConfig::new(Manifold::Nil, BlockKind::Cubic, Grid(vec![n]));
            c.lambda = lambda;
            c.normalized = normalized;
            push(format!("nil-{n}block-{suffix}"), c);
        }
    }
    for kind in [BlockKind::Cubic, BlockKind::Skew, BlockKind::Diamond] {
        for vertices in [6, 12, 24] {
            let blocks = if kind == BlockKind::Diamond { vertices / 2 } else { vertices };
            let c = ExperimentConfig::new(Manifold::Gowdy, kind, Grid(vec![blocks]));
            push(format!("gowdy-{kind}-{vertices}"), c);
        }
    }
    for (kind, grids) in [
        (BlockKind::Cubic, [[4, 6], [6, 6], [6, 8]]),
        (BlockKind::Diamond, [[3, 4], [4, 4], [4, 5]]),
    ] {
        for g in grids {
            let grid = Grid(g.to_vec());
            let c = ExperimentConfig::new(Manifold::Torus4, kind, grid.clone());
            push(format!("torus4-{kind}-{grid}"), c);
        }
    }
    for (kind, ns) in [
        (BlockKind::Cubic, &[2, 3, 4][..]),
        (BlockKind::Skew, &[2, 4][..]),
        (BlockKind::Diamond, &[1, 2, 3][..]),
    ] {
        for &n in ns {
            let c = ExperimentConfig::new(Manifold::Perturbed, kind, Grid(vec![n]));
            push(format!("perturbed-{kind}-{n}"), c);
        }
    }
    out
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    match presets().into_iter().find(|p| p.preset.as_deref() == Some(name)) {
        Some(p) => Ok(p),
        None => bail!("unknown preset `{name}` (see `ricci-mesh presets`)"),
    }
}
