//! Layered settings: built-in defaults, then the config file's `[common]`
//! and subcommand sections, then `JUMPGA_OUTPUT_DIR`, then flags.

use std::fmt;
use std::path::{Path, PathBuf};

use jumpga_core::experiments::takeover_scale;
use jumpga_core::ga::default_stride;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const OUTPUT_DIR_ENV: &str = "JUMPGA_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Takeover,
    Survival,
    Figure1,
    Compare,
    Bounds,
    Sweep,
    Oracle,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Run,
        Command::Takeover,
        Command::Survival,
        Command::Figure1,
        Command::Compare,
        Command::Bounds,
        Command::Sweep,
        Command::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Takeover => "takeover",
            Command::Survival => "survival",
            Command::Figure1 => "figure1",
            Command::Compare => "compare",
            Command::Bounds => "bounds",
            Command::Sweep => "sweep",
            Command::Oracle => "oracle",
        }
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Keys the subcommand reads; anything else in its section is rejected.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Run | Command::Takeover | Command::Compare => &[
                "output_dir",
                "seed",
                "n",
                "k",
                "mu",
                "pc",
                "chi",
                "replicates",
                "max_iterations",
            ],
            Command::Survival => &[
                "output_dir",
                "seed",
                "n",
                "k",
                "pc",
                "chi",
                "mus",
                "replicates",
                "lambda",
                "t_max",
                "takeover_cap",
            ],
            Command::Figure1 => &[
                "output_dir",
                "seed",
                "n",
                "k",
                "mu",
                "pc",
                "chi",
                "stride",
                "max_iterations",
                "runs",
                "svg",
            ],
            Command::Bounds => &[
                "output_dir",
                "seed",
                "n",
                "k",
                "pc",
                "chi",
                "grid",
                "lambda",
            ],
            Command::Sweep => &[
                "output_dir",
                "seed",
                "n",
                "k",
                "pc",
                "chi",
                "grid",
                "trials",
                "o_constant",
            ],
            Command::Oracle => &["output_dir", "seed", "n", "k", "chi", "distances", "trials"],
        }
    }

    pub fn defaults(self) -> Settings {
        let mut s = Settings {
            output_dir: Some(PathBuf::from("out").join(self.name())),
            seed: Some(1),
            chi: Some(1.0),
            pc: Some(0.5),
            k: Some(3),
            ..Settings::default()
        };
        match self {
            Command::Run | Command::Compare => {
                s.n = Some(40);
                s.mu = Some(12);
                s.replicates = Some(20);
                s.max_iterations = Some(10_000_000);
            }
            Command::Takeover => {
                s.n = Some(100);
                s.mu = Some(20);
                s.replicates = Some(50);
            }
            Command::Survival => {
                s.n = Some(200);
                s.mus = Some(vec![16, 32, 64]);
                s.replicates = Some(30);
                s.lambda = Some(0.75);
                s.t_max = Some(100_000);
            }
            Command::Figure1 => {
                s.n = Some(100);
                s.k = Some(5);
                s.mu = Some(20);
                s.pc = Some(1.0);
                s.max_iterations = Some(100_000_000);
                s.runs = Some(1);
                s.svg = Some(true);
            }
            Command::Bounds => {
                s.n = Some(100);
                s.grid = Some(Grid::Default);
                s.lambda = Some(0.75);
            }
            Command::Sweep => {
                s.n = Some(100);
                s.grid = Some(Grid::Default);
                s.trials = Some(250_000);
                s.o_constant = Some(10.0);
            }
            Command::Oracle => {
                s.n = Some(20);
                s.pc = None;
                s.distances = Some(vec![0, 1, 2, 3]);
                s.trials = Some(1_000_000);
            }
        }
        s
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Population sizes of a bound grid: `"default"` or an explicit list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grid {
    Default,
    Mus(Vec<usize>),
}

impl Grid {
    pub const DEFAULT_MUS: [usize; 3] = [4, 8, 16];

    pub fn mus(&self) -> Vec<usize> {
        match self {
            Grid::Default => Self::DEFAULT_MUS.to_vec(),
            Grid::Mus(m) => m.clone(),
        }
    }
}

impl std::str::FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "default" {
            return Ok(Grid::Default);
        }
        let mus = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("invalid grid entry `{p}`"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Grid::Mus(mus))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::Default => f.write_str("default"),
            Grid::Mus(m) => {
                let parts: Vec<String> = m.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl Serialize for Grid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            List(Vec<usize>),
        }
        match Raw::deserialize(d)? {
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
            Raw::List(l) => Ok(Grid::Mus(l)),
        }
    }
}

/// Every configurable key. `None` means "not set at this layer".
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mus: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub takeover_cap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stride: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runs: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Grid>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub o_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<usize>>,
}

macro_rules! each_field {
    ($m:ident) => {
        $m!(
            output_dir,
            seed,
            n,
            k,
            mu,
            pc,
            chi,
            replicates,
            max_iterations,
            mus,
            lambda,
            t_max,
            takeover_cap,
            stride,
            runs,
            svg,
            grid,
            trials,
            o_constant,
            distances
        )
    };
}

impl Settings {
    /// Values set in `top` win.
    pub fn overlay(self, top: Settings) -> Settings {
        macro_rules! merge {
            ($($f:ident),*) => { Settings { $($f: top.$f.or(self.$f)),* } };
        }
        each_field!(merge)
    }

    /// Names of the keys set at this layer.
    pub fn set_keys(&self) -> Vec<&'static str> {
        let mut keys = Vec::new();
        macro_rules! collect {
            ($($f:ident),*) => { $(if self.$f.is_some() { keys.push(stringify!($f)); })* };
        }
        each_field!(collect);
        keys
    }

    /// Drops every key the subcommand does not read.
    pub fn restrict(mut self, cmd: Command) -> Settings {
        let keep = cmd.keys();
        macro_rules! clear {
            ($($f:ident),*) => { $(if !keep.contains(&stringify!($f)) { self.$f = None; })* };
        }
        each_field!(clear);
        self
    }

    fn check_keys(&self, cmd: Command, origin: &str) -> Result<()> {
        for key in self.set_keys() {
            if !cmd.keys().contains(&key) {
                return Err(CliError::usage(format!(
                    "{origin}: key `{key}` is not used by `{cmd}`"
                )));
            }
        }
        Ok(())
    }
}

/// Parsed config file: an optional `[common]` section shared by all
/// subcommands plus one section per subcommand.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub common: Settings,
    pub sections: Vec<(Command, Settings)>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile> {
        let table: toml::Table = text
            .parse()
            .map_err(|e| CliError::usage(format!("config: {e}")))?;
        let mut file = ConfigFile::default();
        for (name, value) in table {
            let toml::Value::Table(section) = value else {
                return Err(CliError::usage(format!(
                    "config: top-level key `{name}` must be a [section]"
                )));
            };
            let settings: Settings = toml::Value::Table(section)
                .try_into()
                .map_err(|e| CliError::usage(format!("config [{name}]: {e}")))?;
            if name == "common" {
                file.common = settings;
                continue;
            }
            let cmd = Command::from_name(&name)
                .ok_or_else(|| CliError::usage(format!("config: unknown section [{name}]")))?;
            settings.check_keys(cmd, &format!("config [{name}]"))?;
            file.sections.push((cmd, settings));
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn section(&self, cmd: Command) -> Settings {
        self.sections
            .iter()
            .find(|(c, _)| *c == cmd)
            .map(|(_, s)| s.clone())
            .unwrap_or_default()
    }
}

/// Effective settings for `cmd`: defaults, then the file, then the
/// output-directory environment override, then flags.
pub fn resolve(
    cmd: Command,
    file: Option<&ConfigFile>,
    env_output_dir: Option<PathBuf>,
    flags: Settings,
) -> Result<Settings> {
    flags.check_keys(cmd, "flags")?;
    let mut s = cmd.defaults();
    if let Some(file) = file {
        s = s
            .overlay(file.common.clone().restrict(cmd))
            .overlay(file.section(cmd));
    }
    if let Some(dir) = env_output_dir {
        s.output_dir = Some(dir);
    }
    let mut s = s.overlay(flags).restrict(cmd);
    complete(cmd, &mut s);
    Ok(s)
}

/// Fills keys whose default depends on other keys, so the echo is complete.
fn complete(cmd: Command, s: &mut Settings) {
    match (cmd, s.mu, s.n) {
        (Command::Figure1, Some(mu), _) if s.stride.is_none() => {
            s.stride = Some(default_stride(mu))
        }
        (Command::Takeover, Some(mu), Some(n)) if s.max_iterations.is_none() => {
            s.max_iterations = Some((100.0 * takeover_scale(n, mu)).ceil() as u64)
        }
        _ => {}
    }
}

/// `[section]` TOML echo of resolved settings.
pub fn render_resolved(cmd: Command, settings: &Settings) -> Result<String> {
    let body = toml::to_string(settings)
        .map_err(|e| CliError::usage(format!("cannot render config: {e}")))?;
    Ok(format!("[{cmd}]\n{body}"))
}
