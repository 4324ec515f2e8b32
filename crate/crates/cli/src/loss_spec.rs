//! `NAME[:params]` loss specifications.

use std::fmt;
use std::str::FromStr;

use lossinfo::losses::{ExponentialSum, NegativeEntropy, SquaredNorm};
use lossinfo::{ConvexGenerator, LossModel};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    SquaredNorm,
    NegativeEntropy,
    ExponentialSum,
}

impl Generator {
    fn name(self) -> &'static str {
        match self {
            Generator::SquaredNorm => "sqnorm",
            Generator::NegativeEntropy => "negentropy",
            Generator::ExponentialSum => "expsum",
        }
    }

    pub fn boxed(self) -> Box<dyn ConvexGenerator> {
        match self {
            Generator::SquaredNorm => Box::new(SquaredNorm),
            Generator::NegativeEntropy => Box::new(NegativeEntropy),
            Generator::ExponentialSum => Box::new(ExponentialSum),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LossSpec {
    Log,
    Tsallis(f64),
    Square,
    Bregman(Generator),
}

impl LossSpec {
    /// Symbolic losses act on the variable's alphabet; the others on its
    /// real embedding.
    pub fn is_symbolic(self) -> bool {
        matches!(self, LossSpec::Log | LossSpec::Tsallis(_))
    }

    pub fn is_log_based(self) -> bool {
        self == LossSpec::Log
    }

    /// `width` is the alphabet size for symbolic losses and the embedding
    /// dimension otherwise.
    pub fn build(self, width: usize) -> lossinfo::Result<LossModel> {
        Ok(match self {
            LossSpec::Log => LossModel::log_loss(width),
            LossSpec::Tsallis(gamma) => LossModel::tsallis(width, gamma)?,
            LossSpec::Square => LossModel::square_error(width),
            LossSpec::Bregman(Generator::SquaredNorm) => LossModel::bregman(SquaredNorm, width),
            LossSpec::Bregman(Generator::NegativeEntropy) => {
                LossModel::bregman(NegativeEntropy, width)
            }
            LossSpec::Bregman(Generator::ExponentialSum) => {
                LossModel::bregman(ExponentialSum, width)
            }
        })
    }

    /// The generator whose Bregman divergence this loss induces on its
    /// state embedding, when one is available.
    pub fn generator(self) -> Option<Generator> {
        match self {
            LossSpec::Log => Some(Generator::NegativeEntropy),
            LossSpec::Tsallis(_) => None,
            LossSpec::Square => Some(Generator::SquaredNorm),
            LossSpec::Bregman(g) => Some(g),
        }
    }
}

impl FromStr for LossSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<LossSpec, String> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s, None),
        };
        let no_param = |spec: LossSpec| match param {
            None => Ok(spec),
            Some(_) => Err(format!("loss `{name}` takes no parameters")),
        };
        match name {
            "log" => no_param(LossSpec::Log),
            "square" => no_param(LossSpec::Square),
            "tsallis" => {
                let raw = param.ok_or("tsallis needs a parameter, as in tsallis:2")?;
                let gamma: f64 = raw
                    .parse()
                    .map_err(|_| format!("tsallis parameter `{raw}` is not a number"))?;
                if !(gamma.is_finite() && gamma > 1.0) {
                    return Err(format!("tsallis parameter must exceed 1, got {gamma}"));
                }
                Ok(LossSpec::Tsallis(gamma))
            }
            "bregman" => match param {
                Some("sqnorm") => Ok(LossSpec::Bregman(Generator::SquaredNorm)),
                Some("negentropy") => Ok(LossSpec::Bregman(Generator::NegativeEntropy)),
                Some("expsum") => Ok(LossSpec::Bregman(Generator::ExponentialSum)),
                _ => Err("bregman needs a generator: sqnorm, negentropy or expsum".into()),
            },
            _ => Err(format!(
                "unknown loss `{name}` (expected log, square, tsallis:GAMMA or bregman:GENERATOR)"
            )),
        }
    }
}

impl fmt::Display for LossSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossSpec::Log => f.write_str("log"),
            LossSpec::Square => f.write_str("square"),
            LossSpec::Tsallis(g) => write!(f, "tsallis:{g}"),
            LossSpec::Bregman(g) => write!(f, "bregman:{}", g.name()),
        }
    }
}
