use std::fmt;

use thiserror::Error;

use super::{parse_angle, Circuit, Instruction, Opcode, SourceLoc};
use crate::stabilizer::MAX_TABLEAU_QUBITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseErrorKind {
    MissingHeader,
    InvalidHeader,
    UnknownOpcode,
    WrongArity,
    MalformedQubit,
    QubitOutOfRange,
    DuplicateQubit,
    MalformedAngle,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at {loc}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub loc: SourceLoc,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, loc: SourceLoc, message: impl Into<String>) -> Self {
        Self { kind, loc, message: message.into() }
    }
}

struct Token<'a> {
    text: &'a str,
    loc: SourceLoc,
}

/// Whitespace-separated tokens of one line with their 1-based columns,
/// stopping at `#`.
fn tokenize(line_no: usize, line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in code.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((byte, col)),
            (true, Some((b, c))) => {
                tokens.push(Token { text: &code[b..byte], loc: SourceLoc { line: line_no, column: c + 1 } });
                start = None;
            }
            _ => {}
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token { text: &code[b..], loc: SourceLoc { line: line_no, column: c + 1 } });
    }
    tokens
}

fn parse_header(tokens: &[Token<'_>]) -> Result<usize, ParseError> {
    let head = &tokens[0];
    if !head.text.eq_ignore_ascii_case("qubits") {
        return Err(ParseError::new(
            ParseErrorKind::MissingHeader,
            head.loc,
            format!("expected `qubits N` before `{}`", head.text),
        ));
    }
    if tokens.len() != 2 {
        return Err(ParseError::new(ParseErrorKind::InvalidHeader, head.loc, "header takes exactly one count"));
    }
    let count = &tokens[1];
    match count.text.parse::<usize>() {
        Ok(n) if (1..=MAX_TABLEAU_QUBITS).contains(&n) && count.text.bytes().all(|b| b.is_ascii_digit()) => Ok(n),
        _ => Err(ParseError::new(
            ParseErrorKind::InvalidHeader,
            count.loc,
            format!("qubit count must be an integer in 1..={MAX_TABLEAU_QUBITS}, got `{}`", count.text),
        )),
    }
}

fn parse_instruction(tokens: &[Token<'_>], num_qubits: usize) -> Result<Instruction, ParseError> {
    let head = &tokens[0];
    if head.text.eq_ignore_ascii_case("qubits") {
        return Err(ParseError::new(ParseErrorKind::InvalidHeader, head.loc, "duplicate `qubits` header"));
    }
    let opcode = Opcode::from_name(head.text).ok_or_else(|| {
        ParseError::new(ParseErrorKind::UnknownOpcode, head.loc, format!("unknown opcode `{}`", head.text))
    })?;
    let n_q = opcode.qubit_arity();
    let expected = 1 + n_q + usize::from(opcode.takes_angle());
    if tokens.len() != expected {
        let loc = tokens.get(expected).map_or(head.loc, |t| t.loc);
        return Err(ParseError::new(
            ParseErrorKind::WrongArity,
            loc,
            format!("`{}` takes {} operand(s), got {}", opcode.name(), expected - 1, tokens.len() - 1),
        ));
    }
    let mut qubits = Vec::with_capacity(n_q);
    for tok in &tokens[1..=n_q] {
        let q: usize =
            tok.text.bytes().all(|b| b.is_ascii_digit()).then(|| tok.text.parse().ok()).flatten().ok_or_else(|| {
                ParseError::new(ParseErrorKind::MalformedQubit, tok.loc, format!("`{}` is not a qubit index", tok.text))
            })?;
        if q >= num_qubits {
            return Err(ParseError::new(
                ParseErrorKind::QubitOutOfRange,
                tok.loc,
                format!("qubit {q} out of range for {num_qubits} qubit(s)"),
            ));
        }
        if qubits.contains(&q) {
            return Err(ParseError::new(ParseErrorKind::DuplicateQubit, tok.loc, format!("qubit {q} repeated")));
        }
        qubits.push(q);
    }
    let angle = if opcode.takes_angle() {
        let tok = &tokens[expected - 1];
        Some(parse_angle(tok.text).ok_or_else(|| {
            ParseError::new(ParseErrorKind::MalformedAngle, tok.loc, format!("malformed angle `{}`", tok.text))
        })?)
    } else {
        None
    };
    Ok(Instruction { opcode, qubits, angle })
}

/// Parses circuit text. `\r\n` line endings are accepted.
pub fn parse(text: &str) -> Result<Circuit, ParseError> {
    let mut num_qubits = None;
    let mut instructions = Vec::new();
    let mut source_map = Vec::new();
    let mut last_line = 1;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let tokens = tokenize(line_no, raw);
        if tokens.is_empty() {
            continue;
        }
        match num_qubits {
            None => num_qubits = Some(parse_header(&tokens)?),
            Some(n) => {
                instructions.push(parse_instruction(&tokens, n)?);
                source_map.push(tokens[0].loc);
            }
        }
    }
    let num_qubits = num_qubits.ok_or_else(|| {
        ParseError::new(ParseErrorKind::MissingHeader, SourceLoc { line: last_line, column: 1 }, "no `qubits N` header")
    })?;
    Ok(Circuit::from_parts(num_qubits, instructions, source_map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::GateKind;

    fn err_kind(text: &str) -> (ParseErrorKind, SourceLoc) {
        let e = parse(text).unwrap_err();
        (e.kind, e.loc)
    }

    #[test]
    fn bell_circuit() {
        let c = parse("qubits 2\nh 0\ncnot 0 1").unwrap();
        assert_eq!(c.num_qubits(), 2);
        assert_eq!(c.instructions().len(), 2);
        assert_eq!(c.instructions()[1], Instruction::gate(GateKind::Cnot, &[0, 1], None));
        assert_eq!(c.source_map()[1], SourceLoc { line: 3, column: 1 });
    }

    #[test]
    fn rotation_angle() {
        let c = parse("qubits 1\nrz 0 pi/4").unwrap();
        assert_eq!(c.instructions()[0].angle, Some(std::f64::consts::FRAC_PI_4));
    }

    #[test]
    fn comments_blank_lines_and_case() {
        let c = parse("# header comment\n\n  QUBITS 3  # three\n\tH 2 # trailing\n\nMeasure 2\r\n").unwrap();
        assert_eq!(c.num_qubits(), 3);
        assert_eq!(c.instructions().len(), 2);
        assert_eq!(c.source_map()[0], SourceLoc { line: 4, column: 2 });
    }

    #[test]
    fn error_kinds_and_locations() {
        assert_eq!(err_kind("qubits 1\nfoo 0"), (ParseErrorKind::UnknownOpcode, SourceLoc { line: 2, column: 1 }));
        assert_eq!(err_kind("h 0\n").0, ParseErrorKind::MissingHeader);
        assert_eq!(err_kind("# only comments\n").0, ParseErrorKind::MissingHeader);
        assert_eq!(err_kind("").0, ParseErrorKind::MissingHeader);
        assert_eq!(err_kind("qubits zero").0, ParseErrorKind::InvalidHeader);
        assert_eq!(err_kind("qubits 0").0, ParseErrorKind::InvalidHeader);
        assert_eq!(err_kind("qubits 2\nqubits 2").0, ParseErrorKind::InvalidHeader);
        assert_eq!(err_kind("qubits 2\ncnot 0"), (ParseErrorKind::WrongArity, SourceLoc { line: 2, column: 1 }));
        assert_eq!(err_kind("qubits 2\nh 0 1"), (ParseErrorKind::WrongArity, SourceLoc { line: 2, column: 5 }));
        assert_eq!(err_kind("qubits 2\nh 2"), (ParseErrorKind::QubitOutOfRange, SourceLoc { line: 2, column: 3 }));
        assert_eq!(err_kind("qubits 2\nh -1").0, ParseErrorKind::MalformedQubit);
        assert_eq!(err_kind("qubits 2\ncz 1 1"), (ParseErrorKind::DuplicateQubit, SourceLoc { line: 2, column: 6 }));
        assert_eq!(
            err_kind("qubits 1\nrx 0 pi/zero"),
            (ParseErrorKind::MalformedAngle, SourceLoc { line: 2, column: 6 })
        );
        assert_eq!(err_kind("qubits 1\nrx 0").0, ParseErrorKind::WrongArity);
    }

    #[test]
    fn unicode_columns_count_characters() {
        let e = parse("qubits 1\n\u{3c0} 0").unwrap_err();
        assert_eq!(e.loc, SourceLoc { line: 2, column: 1 });
        let e = parse("qubits 1\nrz 0 \u{3c0}").unwrap_err();
        assert_eq!((e.kind, e.loc.column), (ParseErrorKind::MalformedAngle, 6));
    }
}
