//! Text form of reduction traces: one step per line, `<position> <step>`,
//! where the position is `root` or dot-separated child indices and the
//! step is `beta`, `eta` or a rule name.

use std::fmt;

use morgandk_core::rewriter::{Step, StepKind};
use morgandk_core::term::name;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceError {
    pub line: usize,
    pub reason: String,
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trace line {}: {}", self.line, self.reason)
    }
}

impl std::error::Error for TraceError {}

pub fn format_step(step: &Step) -> String {
    step.to_string()
}

pub fn position(step: &Step) -> String {
    if step.pos.is_empty() {
        "root".into()
    } else {
        step.pos
            .iter()
            .map(u8::to_string)
            .collect::<Vec<_>>()
            .join(".")
    }
}

pub fn step_name(step: &Step) -> String {
    match &step.kind {
        StepKind::Beta => "beta".into(),
        StepKind::Eta => "eta".into(),
        StepKind::Rule(r) => r.to_string(),
    }
}

pub fn parse_step(text: &str) -> Result<Step, String> {
    let mut parts = text.split_whitespace();
    let (Some(pos), Some(kind), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(format!("expected `<position> <step>`, got `{text}`"));
    };
    let pos = if pos == "root" {
        Vec::new()
    } else {
        pos.split('.')
            .map(|p| match p.parse::<u8>() {
                Ok(i @ (0 | 1)) => Ok(i),
                _ => Err(format!("bad position `{pos}`")),
            })
            .collect::<Result<_, _>>()?
    };
    let kind = match kind {
        "beta" => StepKind::Beta,
        "eta" => StepKind::Eta,
        r => StepKind::Rule(name(r)),
    };
    Ok(Step { pos, kind })
}

/// Parses a whole trace. Blank lines and lines starting with `#` are
/// skipped; a `step N:` prefix, as printed by `--trace`, is accepted.
pub fn parse_trace(text: &str) -> Result<Vec<Step>, TraceError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let body = match line.strip_prefix("step ") {
            Some(rest) => rest.split_once(':').map_or(rest, |(_, s)| s.trim()),
            None => line,
        };
        out.push(parse_step(body).map_err(|reason| TraceError {
            line: i + 1,
            reason,
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steps_round_trip() {
        for s in [
            Step {
                pos: vec![],
                kind: StepKind::Beta,
            },
            Step {
                pos: vec![0, 1, 1],
                kind: StepKind::Eta,
            },
            Step {
                pos: vec![1],
                kind: StepKind::Rule(name("p1/1")),
            },
        ] {
            assert_eq!(parse_step(&format_step(&s)).unwrap(), s);
            assert_eq!(
                format!("{} {}", position(&s), step_name(&s)),
                format_step(&s)
            );
        }
    }

    #[test]
    fn traces_parse() {
        let t = parse_trace("# comment\nstep 1: root sym/1\n\n0.1 beta\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[1].pos, vec![0, 1]);
        assert_eq!(parse_trace("root").unwrap_err().line, 1);
        assert!(parse_step("2 beta").is_err());
    }
}
