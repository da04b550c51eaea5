//! Experiment configuration in TOML.
//!
//! ```toml
//! seed = 7
//!
//! [domain]
//! generator = "ball"
//! K = 8
//! dim = 2
//! radius = 0.45
//!
//! [run]
//! p = [1.25, 1.5, 1.75]
//! refine = 1
//!
//! [set]
//! kind = "half"
//!
//! [samples]
//! pairs = 3
//! ```
//!
//! `emit` writes the canonical form; parsing a canonical file and emitting
//! it again gives the same bytes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use whitext::geometry::domain::{Generator, VoxelDomain};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Seed for random sets and boundary-pair sampling.
    pub seed: u64,
    pub domain: DomainSpec,
    #[serde(default)]
    pub run: RunSpec,
    #[serde(default)]
    pub set: SetSpec,
    #[serde(default)]
    pub samples: SampleSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    /// cube, ball, slit_square, outward_cusp, snowflake_approx or cantor_tube.
    pub generator: String,
    #[serde(rename = "K")]
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slit_len: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
    /// VOXD file the domain was read from.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub p: Vec<f64>,
    /// Extra resolution levels after `K`.
    pub refine: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lmax: Option<i32>,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec { p: vec![1.5], refine: 0, lmax: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    /// half, quadrant, below-slit, random or cubes.
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    /// Dyadic cubes `[level, i, j]` for `kind = "cubes"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cubes: Option<Vec<[i64; 3]>>,
}

impl Default for SetSpec {
    fn default() -> Self {
        SetSpec { kind: "half".into(), density: None, cubes: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    /// Boundary pairs per separation scale.
    pub pairs: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec { pairs: 3 }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {}", e.message())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn emit(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.domain.file.is_none() {
            self.domain.generator()?;
        }
        if self.run.p.is_empty() {
            return Err(CliError::Usage("run.p is empty".into()));
        }
        for &p in &self.run.p {
            if !(1.0..2.0).contains(&p) {
                return Err(CliError::Usage(format!("exponent {p} outside [1,2)")));
            }
        }
        self.set.check()
    }
}

impl DomainSpec {
    pub fn new(generator: &str, k: u32) -> Self {
        DomainSpec {
            generator: generator.into(),
            k,
            dim: None,
            radius: None,
            slit_len: None,
            alpha: None,
            iterations: None,
            depth: None,
            lambda: None,
            file: None,
        }
    }

    pub fn generator(&self) -> Result<Generator, CliError> {
        let dim = self.dim.unwrap_or(2);
        if !(2..=3).contains(&dim) {
            return Err(CliError::Usage(format!("dimension {dim} not in 2..3")));
        }
        let g = match self.generator.as_str() {
            "cube" => Generator::Cube { dim },
            "ball" => Generator::Ball { dim, radius: self.radius.unwrap_or(0.5) },
            "slit_square" => Generator::SlitSquare { slit_len: self.slit_len.unwrap_or(0.5) },
            "outward_cusp" => Generator::OutwardCusp { alpha: self.alpha.unwrap_or(2.0) },
            "snowflake_approx" | "snowflake" => Generator::Snowflake { iterations: self.iterations.unwrap_or(3) },
            "cantor_tube" => Generator::CantorTube { depth: self.depth.unwrap_or(1), lambda: self.lambda.clone() },
            other => return Err(CliError::Usage(format!("unknown generator `{other}`"))),
        };
        Ok(g)
    }

    /// Inverse of [`Generator::tag`], for domains read back from a file.
    pub fn from_tag(tag: &str, k: u32) -> Option<Self> {
        let mut it = tag.split_whitespace();
        let mut s = DomainSpec::new(it.next()?, k);
        for kv in it {
            let (key, val) = kv.split_once('=')?;
            match key {
                "dim" => s.dim = Some(val.parse().ok()?),
                "r" => s.radius = Some(val.parse().ok()?),
                "len" => s.slit_len = Some(val.parse().ok()?),
                "alpha" => s.alpha = Some(val.parse().ok()?),
                "iter" => s.iterations = Some(val.parse().ok()?),
                "depth" => s.depth = Some(val.parse().ok()?),
                "lambda" => s.lambda = Some(val.split(',').map(|v| v.parse().ok()).collect::<Option<Vec<f64>>>()?),
                _ => return None,
            }
        }
        let g = s.generator().ok()?;
        (g.tag() == tag).then_some(s)
    }
}

impl SetSpec {
    fn check(&self) -> Result<(), CliError> {
        match self.kind.as_str() {
            "half" | "quadrant" | "below-slit" => Ok(()),
            "random" => match self.density {
                Some(d) if (0.0..=1.0).contains(&d) => Ok(()),
                _ => Err(CliError::Usage("random set needs density in [0,1]".into())),
            },
            "cubes" => match &self.cubes {
                Some(c) if !c.is_empty() => Ok(()),
                _ => Err(CliError::Usage("cube-union set needs a nonempty cube list".into())),
            },
            other => Err(CliError::Usage(format!("unknown set kind `{other}`"))),
        }
    }

    /// Occupancy of `A ⊂ Ω` on the domain grid.
    pub fn mask(&self, dom: &VoxelDomain, seed: u64) -> Result<Vec<bool>, CliError> {
        self.check()?;
        let g = dom.grid();
        let centers = (0..g.len()).map(|i| (i, g.center(g.coords(i))));
        let mask: Vec<bool> = match self.kind.as_str() {
            "half" => centers.map(|(i, c)| dom.contains_cell(i) && c[0] < 0.5).collect(),
            "quadrant" => centers.map(|(i, c)| dom.contains_cell(i) && c[0] < 0.5 && c[1] < 0.5).collect(),
            "below-slit" => centers.map(|(i, c)| dom.contains_cell(i) && c[1] < 0.5).collect(),
            "random" => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let q = self.density.unwrap_or(0.5);
                (0..g.len()).map(|i| rng.gen_bool(q) && dom.contains_cell(i)).collect()
            }
            _ => {
                let cubes = self.cubes.as_deref().unwrap_or(&[]);
                centers
                    .map(|(i, c)| {
                        dom.contains_cell(i)
                            && cubes.iter().any(|q| {
                                let s = (-(q[0] as f64)).exp2();
                                (0..2).all(|a| c[a] >= q[a + 1] as f64 * s && c[a] < (q[a + 1] + 1) as f64 * s)
                            })
                    })
                    .collect()
            }
        };
        Ok(mask)
    }
}
