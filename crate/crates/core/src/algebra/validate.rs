use std::fmt;
use std::sync::Arc;

use super::mode::{BasicKind, ModePreset, PresetName, SchemaKind};
use super::term::{Node, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A validation finding attached to a subterm position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    /// Child indices from the root, following [`Term::children`].
    pub path: Vec<usize>,
}

impl Diagnostic {
    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        let path: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        let at = if path.is_empty() {
            "root".to_string()
        } else {
            format!("root.{}", path.join("."))
        };
        write!(f, "{sev}[{}] at {at}: {}", self.code, self.message)
    }
}

/// A term that passed validation under a mode preset.
#[derive(Clone, Debug)]
pub struct CheckedTerm {
    term: Term,
    mode: Arc<ModePreset>,
    warnings: Vec<Diagnostic>,
}

impl CheckedTerm {
    pub fn term(&self) -> &Term {
        &self.term
    }

    pub fn mode(&self) -> &ModePreset {
        &self.mode
    }

    pub fn warnings(&self) -> &[Diagnostic] {
        &self.warnings
    }

    pub fn arity(&self) -> usize {
        self.term.arity()
    }
}

impl PartialEq for CheckedTerm {
    fn eq(&self, other: &CheckedTerm) -> bool {
        self.term == other.term && self.mode == other.mode && self.warnings == other.warnings
    }
}

/// Syntactic judgment that `t` only takes the values 0 and 1.
pub fn is_statically_boolean(t: &Term, mode: &ModePreset) -> bool {
    match t.node() {
        Node::Sign | Node::Const0 { .. } | Node::Const1 { .. } => true,
        Node::Oracle { name, .. } => mode.oracle(name).is_some_and(|d| d.boolean),
        Node::Compose { f, args } => {
            if is_statically_boolean(f, mode) {
                return true;
            }
            // cosg pattern 1 − sg(·)
            matches!(f.node(), Node::Sub)
                && args[0].is_const1()
                && matches!(args[1].node(), Node::Compose { f, .. } if matches!(f.node(), Node::Sign))
        }
        _ => false,
    }
}

struct Walker<'a> {
    mode: &'a ModePreset,
    out: Vec<Diagnostic>,
    path: Vec<usize>,
    seen: rustc_hash::FxHashSet<usize>,
}

impl Walker<'_> {
    fn push(&mut self, severity: Severity, code: &'static str, message: String) {
        self.out.push(Diagnostic {
            severity,
            code,
            message,
            path: self.path.clone(),
        });
    }

    fn forbid(&mut self, what: &str) {
        let hint = required_mode_hint(what);
        let mode = self.mode.name;
        self.push(
            Severity::Error,
            "ForbiddenNode",
            format!("{what} is not permitted under {mode}{hint}"),
        );
    }

    fn boolean_guard(&mut self, role: &str, child: usize, t: &Term) {
        if !is_statically_boolean(t, self.mode) {
            self.path.push(child);
            self.push(
                Severity::Warning,
                "DynamicBooleanGuard",
                format!("{role} is not syntactically boolean; its range is checked at evaluation"),
            );
            self.path.pop();
        }
    }

    fn walk(&mut self, t: &Term) {
        // Shared subterms are reported once, at their first position.
        if !self.seen.insert(t.id()) {
            return;
        }
        let m = self.mode;
        match t.node() {
            Node::Times if !m.basics.contains(&BasicKind::Times) => self.forbid("Times"),
            Node::Oracle { name, arity } => {
                match m.oracle(name) {
                    Some(d) if d.arity == *arity => {}
                    Some(d) => self.push(
                        Severity::Error,
                        "InconsistentArity",
                        format!("oracle `{name}` declared with arity {}, used with {arity}", d.arity),
                    ),
                    None => self.push(
                        Severity::Error,
                        "UnknownOracle",
                        format!("oracle `{name}` is not declared under {}", m.name),
                    ),
                }
            }
            Node::Ode1 { h, .. } => {
                self.boolean_guard("ode1 step function", 1, h);
            }
            Node::Ode2 { h, .. } => {
                let weak = h.is_const0()
                    && (m.allows_schema(SchemaKind::WkOde2) || m.allows_schema(SchemaKind::Ode4));
                if !(m.allows_schema(SchemaKind::Ode2) || m.allows_schema(SchemaKind::Ode2Star) || weak) {
                    if m.allows_schema(SchemaKind::WkOde2) {
                        self.forbid("Ode2 with a nonzero step function");
                    } else {
                        self.forbid("Ode2");
                    }
                }
                self.boolean_guard("ode2 step function", 1, h);
            }
            Node::Ode2Star { h, .. } => {
                if !m.allows_schema(SchemaKind::Ode2Star) {
                    self.forbid("Ode2Star");
                }
                self.boolean_guard("ode2* step function", 1, h);
            }
            Node::Ode3 { .. } => {
                if !(m.allows_schema(SchemaKind::Ode3) || m.allows_schema(SchemaKind::Ode4)) {
                    self.forbid("Ode3");
                }
            }
            Node::Ode4 { .. } => {
                if !m.allows_schema(SchemaKind::Ode4) {
                    self.forbid("Ode4");
                }
            }
            Node::Ode1Star { h, k, .. } => {
                if !m.allows_schema(SchemaKind::Ode1Star) {
                    self.forbid("Ode1Star");
                }
                self.boolean_guard("ode1* step function", 1, h);
                self.boolean_guard("ode1* factor", 2, k);
            }
            _ => {}
        }
        for (i, c) in t.children().into_iter().enumerate() {
            self.path.push(i);
            self.walk(c);
            self.path.pop();
        }
    }
}

fn required_mode_hint(what: &str) -> &'static str {
    if what.starts_with("Times") {
        " (requires TCDL)"
    } else if what.starts_with("Ode2Star") {
        " (requires TCDL-STAR)"
    } else if what.starts_with("Ode1Star") {
        " (requires TCDL-SMASH)"
    } else if what.starts_with("Ode4") {
        " (requires ACDL-ODE4)"
    } else {
        ""
    }
}

/// Checks `t` against `mode`, returning the checked term or every error found.
pub fn validate(t: &Term, mode: impl Into<ModePreset>) -> Result<CheckedTerm, Vec<Diagnostic>> {
    let mode = mode.into();
    let mut w = Walker {
        mode: &mode,
        out: Vec::new(),
        path: Vec::new(),
        seen: Default::default(),
    };
    w.walk(t);
    let diags = w.out;
    if diags.iter().any(Diagnostic::is_error) {
        return Err(diags);
    }
    Ok(CheckedTerm {
        term: t.clone(),
        mode: Arc::new(mode),
        warnings: diags,
    })
}

/// Presets under which `t` validates.
pub fn accepting_presets(t: &Term) -> Vec<PresetName> {
    PresetName::ALL
        .into_iter()
        .filter(|p| validate(t, *p).is_ok())
        .collect()
}
