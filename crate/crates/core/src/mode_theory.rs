//! The mode 2-category: two modes, seven modalities, composition, order,
//! safety and adjunctions.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Dm,
    Sm,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Dm, Mode::Sm];
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Dm => write!(f, "dm"),
            Mode::Sm => write!(f, "sm"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modality {
    IdDm,
    IdSm,
    /// △ : dm → sm
    Tri,
    /// ◇ : sm → dm
    Dia,
    /// □ : sm → dm
    Box,
    /// △◇ : sm → sm
    TriDia,
    /// △□ : sm → sm
    TriBox,
}

use Modality::*;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModeError {
    #[error("mode mismatch: {0} and {1} are not composable")]
    NotComposable(Modality, Modality),
    #[error("mode mismatch: {0} and {1} are not parallel")]
    NotParallel(Modality, Modality),
}

const fn index(m: Modality) -> usize {
    match m {
        IdDm => 0,
        IdSm => 1,
        Tri => 2,
        Dia => 3,
        Box => 4,
        TriDia => 5,
        TriBox => 6,
    }
}

const N: Option<Modality> = None;

// COMPOSE[nu][rho] = nu ∘ rho, or None when dom(nu) ≠ cod(rho).
// Row/column order follows `Modality::ALL`.
const COMPOSE: [[Option<Modality>; 7]; 7] = [
    // nu = 1_dm
    [Some(IdDm), N, N, Some(Dia), Some(Box), N, N],
    // nu = 1_sm
    [N, Some(IdSm), Some(Tri), N, N, Some(TriDia), Some(TriBox)],
    // nu = △
    [Some(Tri), N, N, Some(TriDia), Some(TriBox), N, N],
    // nu = ◇
    [N, Some(Dia), Some(IdDm), N, N, Some(Dia), Some(Box)],
    // nu = □
    [N, Some(Box), Some(IdDm), N, N, Some(Dia), Some(Box)],
    // nu = △◇
    [N, Some(TriDia), Some(Tri), N, N, Some(TriDia), Some(TriBox)],
    // nu = △□
    [N, Some(TriBox), Some(Tri), N, N, Some(TriDia), Some(TriBox)],
];

// Strict part of the hom-poset order.
const LEQ_PAIRS: [(Modality, Modality); 4] =
    [(Box, Dia), (TriBox, IdSm), (IdSm, TriDia), (TriBox, TriDia)];

impl Modality {
    pub const ALL: [Modality; 7] = [IdDm, IdSm, Tri, Dia, Box, TriDia, TriBox];

    pub fn dom(self) -> Mode {
        match self {
            IdDm | Tri => Mode::Dm,
            IdSm | Dia | Box | TriDia | TriBox => Mode::Sm,
        }
    }

    pub fn cod(self) -> Mode {
        match self {
            IdDm | Dia | Box => Mode::Dm,
            IdSm | Tri | TriDia | TriBox => Mode::Sm,
        }
    }

    pub fn id(mode: Mode) -> Modality {
        match mode {
            Mode::Dm => IdDm,
            Mode::Sm => IdSm,
        }
    }

    pub fn is_identity(self) -> bool {
        matches!(self, IdDm | IdSm)
    }

    pub fn is_parallel(self, other: Modality) -> bool {
        self.dom() == other.dom() && self.cod() == other.cod()
    }

    /// ASCII spelling used by the surface syntax and `--no-unicode` output.
    pub fn ascii(self) -> &'static str {
        match self {
            IdDm => "1dm",
            IdSm => "1sm",
            Tri => "T",
            Dia => "D",
            Box => "B",
            TriDia => "TD",
            TriBox => "TB",
        }
    }

    pub fn unicode(self) -> &'static str {
        match self {
            IdDm => "1_dm",
            IdSm => "1_sm",
            Tri => "△",
            Dia => "◇",
            Box => "□",
            TriDia => "△◇",
            TriBox => "△□",
        }
    }

    pub fn from_ascii(s: &str) -> Option<Modality> {
        Some(match s {
            "T" | "△" => Tri,
            "D" | "◇" => Dia,
            "B" | "□" => Box,
            "TD" | "△◇" => TriDia,
            "TB" | "△□" => TriBox,
            _ => return None,
        })
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.unicode())
    }
}

/// `nu ∘ rho`.
pub fn compose(nu: Modality, rho: Modality) -> Result<Modality, ModeError> {
    COMPOSE[index(nu)][index(rho)].ok_or(ModeError::NotComposable(nu, rho))
}

pub fn leq(mu: Modality, nu: Modality) -> Result<bool, ModeError> {
    if !mu.is_parallel(nu) {
        return Err(ModeError::NotParallel(mu, nu));
    }
    Ok(mu == nu || LEQ_PAIRS.contains(&(mu, nu)))
}

/// Like [`leq`], but false for non-parallel arrows.
pub fn leq_or_false(mu: Modality, nu: Modality) -> bool {
    leq(mu, nu).unwrap_or(false)
}

pub fn is_hazardous(mu: Modality) -> bool {
    matches!(mu, Dia | TriDia)
}

/// The ν with μ ⊣ ν among ◇ ⊣ △ ⊣ □, △◇ ⊣ △□ and 1 ⊣ 1.
pub fn right_adjoint(mu: Modality) -> Option<Modality> {
    match mu {
        IdDm => Some(IdDm),
        IdSm => Some(IdSm),
        Dia => Some(Tri),
        Tri => Some(Box),
        TriDia => Some(TriBox),
        Box | TriBox => None,
    }
}

/// The λ with λ ⊣ μ. Exactly the safe modalities have one.
pub fn left_adjoint(mu: Modality) -> Option<Modality> {
    Modality::ALL
        .into_iter()
        .find(|&l| right_adjoint(l) == Some(mu))
}

/// Whether `mu` is safe (not hazardous).
pub fn is_safe(mu: Modality) -> bool {
    !is_hazardous(mu)
}

/// Is `mu` of the form △∘ν.
pub fn is_tri_composite(mu: Modality) -> bool {
    matches!(mu, Tri | TriDia | TriBox)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_tables() {
        assert_eq!(compose(Dia, Tri), Ok(IdDm));
        assert_eq!(compose(Tri, Box), Ok(TriBox));
        assert_eq!(compose(IdSm, TriBox), Ok(TriBox));
        assert_eq!(compose(Box, TriDia), Ok(Dia));
        assert_eq!(compose(TriDia, TriBox), Ok(TriBox));
        assert!(compose(Tri, Tri).is_err());
    }

    #[test]
    fn order_examples() {
        assert_eq!(leq(Box, Dia), Ok(true));
        assert_eq!(leq(TriBox, TriBox), Ok(true));
        assert_eq!(leq(TriDia, TriBox), Ok(false));
        assert!(leq(Tri, Box).is_err());
    }

    #[test]
    fn hazards() {
        assert!(is_hazardous(Dia));
        assert!(!is_hazardous(IdDm));
        assert!(is_hazardous(compose(Box, TriDia).unwrap()));
    }

    #[test]
    fn adjoints() {
        assert_eq!(right_adjoint(Tri), Some(Box));
        assert_eq!(right_adjoint(IdSm), Some(IdSm));
        assert_eq!(right_adjoint(TriDia), Some(TriBox));
        for m in Modality::ALL {
            assert_eq!(left_adjoint(m).is_some(), is_safe(m), "{m}");
        }
    }
}
