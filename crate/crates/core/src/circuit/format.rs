//! Line-oriented interchange format and DOT export.
//!
//! ```text
//! odecirc-circuit v1
//! variant AC
//! n_inputs 2
//! k 3
//! depth 2
//! m 1
//! gate 4 1 or 0
//! outputs 7
//! ```
//! One `gate id level kind preds…` record per gate; `#` starts a comment.

use std::fmt::Write as _;

use super::{Circuit, Gate, GateKind, Variant};

const MAGIC: &str = "odecirc-circuit";
const VERSION: &str = "v1";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, {field}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub field: String,
    pub message: String,
}

pub fn encode(c: &Circuit) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{MAGIC} {VERSION}");
    let _ = writeln!(s, "variant {}", c.variant());
    let _ = writeln!(s, "n_inputs {}", c.n_inputs());
    let _ = writeln!(s, "k {}", c.k());
    let _ = writeln!(s, "depth {}", c.depth());
    let _ = writeln!(s, "m {}", c.m());
    for g in c.gates() {
        let _ = write!(s, "gate {} {} {}", g.id, g.level, g.kind.as_str());
        for p in &g.preds {
            let _ = write!(s, " {p}");
        }
        s.push('\n');
    }
    s.push_str("outputs");
    for o in c.outputs() {
        let _ = write!(s, " {o}");
    }
    s.push('\n');
    s
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let text = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = text.split_whitespace().collect();
            if !words.is_empty() {
                return Some((i + 1, words));
            }
        }
        None
    }

    fn expect(&mut self, key: &str) -> Result<(usize, Vec<&'a str>), ParseError> {
        match self.next() {
            Some((line, words)) if words[0] == key => Ok((line, words)),
            Some((line, words)) => Err(err(line, key, format!("expected `{key}`, found `{}`", words[0]))),
            None => Err(err(self.last + 1, key, "unexpected end of input".into())),
        }
    }

    fn scalar<T: std::str::FromStr>(&mut self, key: &str) -> Result<T, ParseError>
    where
        T::Err: std::fmt::Display,
    {
        let (line, words) = self.expect(key)?;
        if words.len() != 2 {
            return Err(err(line, key, "expected exactly one value".into()));
        }
        words[1].parse().map_err(|e: T::Err| err(line, key, e.to_string()))
    }
}

fn err(line: usize, field: &str, message: String) -> ParseError {
    ParseError {
        line,
        field: field.to_string(),
        message,
    }
}

fn num(line: usize, field: &str, w: &str) -> Result<u64, ParseError> {
    w.parse().map_err(|_| err(line, field, format!("`{w}` is not a decimal id")))
}

pub fn decode(text: &str) -> Result<Circuit, ParseError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (line, header) = lines.expect(MAGIC)?;
    if header.get(1) != Some(&VERSION) || header.len() != 2 {
        return Err(err(line, "version", format!("expected `{MAGIC} {VERSION}`")));
    }
    let variant: Variant = lines.scalar("variant")?;
    let n_inputs: usize = lines.scalar("n_inputs")?;
    let k: u32 = lines.scalar("k")?;
    let depth: u32 = lines.scalar("depth")?;
    let m: usize = lines.scalar("m")?;
    let mut gates = Vec::new();
    loop {
        let Some((line, words)) = lines.next() else {
            return Err(err(lines.last + 1, "outputs", "unexpected end of input".into()));
        };
        match words[0] {
            "gate" => {
                if words.len() < 4 {
                    return Err(err(line, "gate", "expected `gate id level kind preds…`".into()));
                }
                let id = num(line, "gate.id", words[1])?;
                let level = num(line, "gate.level", words[2])? as u32;
                let kind: GateKind = words[3].parse().map_err(|e| err(line, "gate.kind", e))?;
                let preds = words[4..]
                    .iter()
                    .map(|w| num(line, "gate.preds", w))
                    .collect::<Result<_, _>>()?;
                gates.push(Gate::new(id, level, kind, preds));
            }
            "outputs" => {
                let outputs: Vec<u64> = words[1..]
                    .iter()
                    .map(|w| num(line, "outputs", w))
                    .collect::<Result<_, _>>()?;
                if outputs.len() != m {
                    return Err(err(line, "outputs", format!("{} ids listed, m = {m}", outputs.len())));
                }
                if let Some((line, words)) = lines.next() {
                    return Err(err(line, words[0], "trailing content after outputs".into()));
                }
                return Ok(Circuit::new(variant, n_inputs, k, depth, gates, outputs));
            }
            other => return Err(err(line, other, "expected `gate` or `outputs`".into())),
        }
    }
}

/// Graphviz rendering, one rank per level.
pub fn to_dot(c: &Circuit) -> String {
    let mut s = String::from("digraph circuit {\n  rankdir=BT;\n");
    for level in 0..=c.depth() {
        let _ = write!(s, "  {{ rank=same;");
        for g in c.gates().iter().filter(|g| g.level == level) {
            let _ = write!(s, " g{};", g.id);
        }
        s.push_str(" }\n");
    }
    let n = c.n_inputs() as u64;
    for g in c.gates() {
        let label = match g.kind {
            GateKind::InputPos => format!("x{}", g.id),
            GateKind::InputNeg => format!("¬x{}", g.id - n),
            k => format!("{} {}", k.as_str(), g.id),
        };
        let shape = if c.outputs().contains(&g.id) { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  g{} [label=\"{label}\", shape={shape}];", g.id);
    }
    for (to, from) in c.edges() {
        let _ = writeln!(s, "  g{from} -> g{to};");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    #[test]
    fn round_trip_examples() {
        for c in [and_buffer_circuit(), single_maj_circuit(), identity_circuit()] {
            assert_eq!(decode(&encode(&c)).unwrap(), c);
        }
    }

    #[test]
    fn truncated_file() {
        let text = encode(&and_buffer_circuit());
        let cut: String = text.lines().take(7).map(|l| format!("{l}\n")).collect();
        let e = decode(&cut).unwrap_err();
        assert_eq!(e.field, "outputs");
    }

    #[test]
    fn unknown_gate_kind() {
        let text = encode(&and_buffer_circuit()).replace(" or ", " xor ");
        let e = decode(&text).unwrap_err();
        assert_eq!((e.line, e.field.as_str()), (11, "gate.kind"));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = encode(&and_buffer_circuit()).replace("\nk 3", "\n\n# exponent\nk 3 # n^k");
        assert_eq!(decode(&text).unwrap(), and_buffer_circuit());
    }

    #[test]
    fn dot_mentions_every_edge() {
        let c = and_buffer_circuit();
        let dot = to_dot(&c);
        assert_eq!(dot.matches("->").count(), c.edges().count());
    }
}
