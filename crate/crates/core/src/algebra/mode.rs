use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PresetName {
    Acdl,
    AcdlSmash,
    AcdlWk,
    AcdlOde4,
    Tcdl,
    TcdlStar,
    TcdlSmash,
}

impl PresetName {
    pub const ALL: [PresetName; 7] = [
        PresetName::Acdl,
        PresetName::AcdlSmash,
        PresetName::AcdlWk,
        PresetName::AcdlOde4,
        PresetName::Tcdl,
        PresetName::TcdlStar,
        PresetName::TcdlSmash,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PresetName::Acdl => "ACDL",
            PresetName::AcdlSmash => "ACDL-SMASH",
            PresetName::AcdlWk => "ACDL-WK",
            PresetName::AcdlOde4 => "ACDL-ODE4",
            PresetName::Tcdl => "TCDL",
            PresetName::TcdlStar => "TCDL-STAR",
            PresetName::TcdlSmash => "TCDL-SMASH",
        }
    }

    /// Presets characterizing the threshold class.
    pub fn is_threshold(self) -> bool {
        matches!(
            self,
            PresetName::Tcdl | PresetName::TcdlStar | PresetName::TcdlSmash
        )
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = String;
    fn from_str(s: &str) -> Result<PresetName, String> {
        let up = s.trim().to_ascii_uppercase().replace('_', "-");
        PresetName::ALL
            .into_iter()
            .find(|p| p.as_str() == up)
            .ok_or_else(|| format!("unknown mode `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasicKind {
    Const,
    Length,
    Sign,
    Add,
    Sub,
    Div2,
    Times,
    Proj,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemaKind {
    Ode1,
    Ode2,
    /// `Ode2` restricted to h ≡ 0.
    WkOde2,
    Ode3,
    Ode4,
    Ode1Star,
    Ode2Star,
}

/// Declaration of an oracle basic function.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OracleDecl {
    pub name: String,
    pub arity: usize,
    pub boolean: bool,
}

impl OracleDecl {
    pub fn new(name: &str, arity: usize, boolean: bool) -> OracleDecl {
        OracleDecl {
            name: name.to_string(),
            arity,
            boolean,
        }
    }
}

/// Name under which the smash function is available as a basic function.
pub const SMASH_ORACLE: &str = "smash";

/// The set of basic functions and schemas one characterization permits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModePreset {
    pub name: PresetName,
    pub basics: BTreeSet<BasicKind>,
    pub schemas: BTreeSet<SchemaKind>,
    pub oracles: Vec<OracleDecl>,
    pub extra_oracles: bool,
}

impl ModePreset {
    pub fn new(name: PresetName) -> ModePreset {
        use BasicKind::*;
        use SchemaKind::*;
        let mut basics: BTreeSet<BasicKind> =
            [Const, Length, Sign, Add, Sub, Div2, Proj].into_iter().collect();
        let schemas: &[SchemaKind] = match name {
            PresetName::Acdl | PresetName::Tcdl => &[Ode2, Ode3],
            PresetName::AcdlSmash => &[Ode1, Ode3],
            PresetName::AcdlWk => &[Ode1, WkOde2, Ode3],
            PresetName::AcdlOde4 => &[Ode1, Ode4],
            PresetName::TcdlStar => &[Ode2Star, Ode3],
            PresetName::TcdlSmash => &[Ode1Star, Ode3],
        };
        if name == PresetName::Tcdl {
            basics.insert(Times);
        }
        let oracles = match name {
            PresetName::AcdlSmash | PresetName::TcdlSmash => {
                vec![OracleDecl::new(SMASH_ORACLE, 2, false)]
            }
            _ => vec![],
        };
        ModePreset {
            name,
            basics,
            schemas: schemas.iter().copied().collect(),
            oracles,
            extra_oracles: false,
        }
    }

    /// The same preset extended with oracle basic functions.
    pub fn with_oracles(mut self, decls: impl IntoIterator<Item = OracleDecl>) -> ModePreset {
        for d in decls {
            if !self.oracles.contains(&d) {
                self.oracles.push(d);
            }
        }
        self.extra_oracles = true;
        self
    }

    pub fn oracle(&self, name: &str) -> Option<&OracleDecl> {
        self.oracles.iter().find(|d| d.name == name)
    }

    pub fn allows_schema(&self, s: SchemaKind) -> bool {
        self.schemas.contains(&s)
    }

    pub fn is_threshold(&self) -> bool {
        self.name.is_threshold()
    }
}

impl From<PresetName> for ModePreset {
    fn from(name: PresetName) -> ModePreset {
        ModePreset::new(name)
    }
}
