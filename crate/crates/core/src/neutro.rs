//! Values of the form a + bI with I² = I, and the rules that collapse them
//! back onto the three node states.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NeutroError {
    #[error("coefficient overflow in {op}")]
    Overflow { op: &'static str },
    #[error("bad value token `{0}`")]
    BadToken(String),
}

/// a + bI over 32-bit integers. Stored exactly as computed; collapsing is
/// always an explicit step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NeutroValue {
    pub real: i32,
    pub indet: i32,
}

impl NeutroValue {
    pub const ZERO: NeutroValue = NeutroValue { real: 0, indet: 0 };
    pub const ONE: NeutroValue = NeutroValue { real: 1, indet: 0 };
    pub const I: NeutroValue = NeutroValue { real: 0, indet: 1 };

    pub const fn new(real: i32, indet: i32) -> Self {
        NeutroValue { real, indet }
    }

    pub const fn int(real: i32) -> Self {
        NeutroValue { real, indet: 0 }
    }

    pub fn is_zero(self) -> bool {
        self.real == 0 && self.indet == 0
    }

    /// True when the value carries any I component.
    pub fn has_indet(self) -> bool {
        self.indet != 0
    }

    pub fn checked_add(self, other: Self) -> Result<Self, NeutroError> {
        let overflow = NeutroError::Overflow { op: "add" };
        Ok(NeutroValue {
            real: self.real.checked_add(other.real).ok_or(overflow.clone())?,
            indet: self.indet.checked_add(other.indet).ok_or(overflow)?,
        })
    }

    /// (a1 + b1 I)(a2 + b2 I) = a1 a2 + (a1 b2 + b1 a2 + b1 b2) I
    pub fn checked_mul(self, other: Self) -> Result<Self, NeutroError> {
        let overflow = || NeutroError::Overflow { op: "mul" };
        let (a1, b1, a2, b2) = (self.real, self.indet, other.real, other.indet);
        let real = a1.checked_mul(a2).ok_or_else(overflow)?;
        let indet = a1
            .checked_mul(b2)
            .and_then(|x| x.checked_add(b1.checked_mul(a2)?))
            .and_then(|x| x.checked_add(b1.checked_mul(b2)?))
            .ok_or_else(overflow)?;
        Ok(NeutroValue { real, indet })
    }

    pub fn checked_neg(self) -> Result<Self, NeutroError> {
        let overflow = || NeutroError::Overflow { op: "neg" };
        Ok(NeutroValue {
            real: self.real.checked_neg().ok_or_else(overflow)?,
            indet: self.indet.checked_neg().ok_or_else(overflow)?,
        })
    }
}

pub fn neutro_add(x: NeutroValue, y: NeutroValue) -> Result<NeutroValue, NeutroError> {
    x.checked_add(y)
}

pub fn neutro_mul(x: NeutroValue, y: NeutroValue) -> Result<NeutroValue, NeutroError> {
    x.checked_mul(y)
}

impl fmt::Display for NeutroValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (self.real, self.indet);
        match (a, b) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => f.write_str("I"),
            (0, -1) => f.write_str("-I"),
            (0, b) => write!(f, "{b}I"),
            (a, 1) => write!(f, "{a}+I"),
            (a, -1) => write!(f, "{a}-I"),
            (a, b) if b < 0 => write!(f, "{a}{b}I"),
            (a, b) => write!(f, "{a}+{b}I"),
        }
    }
}

fn parse_coeff(s: &str, whole: &str) -> Result<i32, NeutroError> {
    let bad = || NeutroError::BadToken(whole.to_string());
    match s {
        "" | "+" => Ok(1),
        "-" => Ok(-1),
        _ => {
            let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
            if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            s.parse().map_err(|_| bad())
        }
    }
}

impl FromStr for NeutroValue {
    type Err = NeutroError;

    /// Accepts `-1 0 1 I -I <int> <int>I <int>+<int>I`, plus the signed
    /// variants `<int>+I`, `<int>-I` and `<int>-<int>I`.
    fn from_str(tok: &str) -> Result<Self, Self::Err> {
        let bad = || NeutroError::BadToken(tok.to_string());
        let Some(body) = tok.strip_suffix('I') else {
            if matches!(tok, "" | "+" | "-") {
                return Err(bad());
            }
            return Ok(NeutroValue::int(parse_coeff(tok, tok)?));
        };
        // the split point is the last sign that is not the leading one
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        match split {
            None => Ok(NeutroValue::new(0, parse_coeff(body, tok)?)),
            Some(i) => {
                let (real, indet) = body.split_at(i);
                if real.is_empty() || real == "-" || real == "+" {
                    return Err(bad());
                }
                let real = parse_coeff(real, tok)?;
                let indet = parse_coeff(indet, tok)?;
                Ok(NeutroValue::new(real, indet))
            }
        }
    }
}

/// Node state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum TriState {
    #[default]
    Off,
    On,
    Indet,
}

impl TriState {
    pub fn lift(self) -> NeutroValue {
        match self {
            TriState::Off => NeutroValue::ZERO,
            TriState::On => NeutroValue::ONE,
            TriState::Indet => NeutroValue::I,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            TriState::Off => "0",
            TriState::On => "1",
            TriState::Indet => "I",
        }
    }

    pub fn from_token(tok: &str) -> Option<TriState> {
        match tok {
            "0" => Some(TriState::Off),
            "1" => Some(TriState::On),
            "I" => Some(TriState::Indet),
            _ => None,
        }
    }
}

impl fmt::Display for TriState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Outcome of a collapse before it is narrowed to a `TriState`. `Inhibited`
/// only appears in bipolar mode and reads as OFF in state vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Activation {
    Off,
    On,
    Indet,
    Inhibited,
}

impl Activation {
    pub fn state(self) -> TriState {
        match self {
            Activation::On => TriState::On,
            Activation::Indet => TriState::Indet,
            Activation::Off | Activation::Inhibited => TriState::Off,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NegativeMode {
    #[default]
    ClipToOff,
    Bipolar,
}

/// What a + bI with a = b != 0 collapses to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieRule {
    #[default]
    Off,
    /// INDET when b reaches k_indet, OFF otherwise.
    Indet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ThresholdPolicy {
    pub k_on: i32,
    pub k_indet: i32,
    pub negative_mode: NegativeMode,
    pub tie: TieRule,
}

impl Default for ThresholdPolicy {
    fn default() -> Self {
        ThresholdPolicy::simple()
    }
}

impl ThresholdPolicy {
    /// Single-expert maps: k_on = k_indet = 1.
    pub const fn simple() -> Self {
        ThresholdPolicy::with_k(1, 1)
    }

    /// Summed multi-expert maps: k_on = k_indet = 2.
    pub const fn combined() -> Self {
        ThresholdPolicy::with_k(2, 2)
    }

    pub const fn with_k(k_on: i32, k_indet: i32) -> Self {
        ThresholdPolicy {
            k_on,
            k_indet,
            negative_mode: NegativeMode::ClipToOff,
            tie: TieRule::Off,
        }
    }

    pub const fn tie(mut self, tie: TieRule) -> Self {
        self.tie = tie;
        self
    }

    pub const fn negative_mode(mut self, mode: NegativeMode) -> Self {
        self.negative_mode = mode;
        self
    }

    pub fn is_valid(&self) -> bool {
        self.k_on >= 1 && self.k_indet >= 1
    }
}

pub fn collapse_activation(v: NeutroValue, p: &ThresholdPolicy) -> Activation {
    let (a, b) = (v.real, v.indet);
    if a == 0 && b == 0 {
        return Activation::Off;
    }
    if p.negative_mode == NegativeMode::Bipolar && a <= -p.k_on && b < p.k_indet {
        return Activation::Inhibited;
    }
    if a > b {
        if a >= p.k_on {
            Activation::On
        } else {
            Activation::Off
        }
    } else if b > a {
        if b >= p.k_indet {
            Activation::Indet
        } else {
            Activation::Off
        }
    } else {
        match p.tie {
            TieRule::Indet if b >= p.k_indet => Activation::Indet,
            _ => Activation::Off,
        }
    }
}

pub fn collapse(v: NeutroValue, p: &ThresholdPolicy) -> TriState {
    collapse_activation(v, p).state()
}

/// Sum of row[i] * lift(state[i]). Callers guarantee equal lengths.
pub fn neutro_dot(row: &[NeutroValue], state: &[TriState]) -> Result<NeutroValue, NeutroError> {
    assert_eq!(row.len(), state.len(), "neutro_dot: length mismatch");
    row.iter()
        .zip(state)
        .filter(|(_, s)| **s != TriState::Off)
        .try_fold(NeutroValue::ZERO, |acc, (w, s)| {
            acc.checked_add(w.checked_mul(s.lift())?)
        })
}
