//! OpenQASM 2.0 subset: flat gate lists over a single quantum register.
//!
//! Accepted statements are the version header, `include` (ignored), one
//! `qreg`, any number of `creg`, the gates of [`GateKind`], `measure` and
//! `barrier`. Gate definitions, `opaque`, `if` and `reset` are rejected.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use crate::gate::{Circuit, Gate, GateKind};

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownGate(String),
    QubitOutOfRange {
        index: usize,
        size: usize,
    },
    DuplicateOperand(usize),
    BadParams {
        gate: GateKind,
        expected: usize,
        found: usize,
    },
    MultipleQreg,
    MissingQreg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: ", self.line)?;
        match &self.kind {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownGate(name) => write!(f, "unknown gate `{name}`"),
            ParseErrorKind::QubitOutOfRange { index, size } => {
                write!(
                    f,
                    "qubit index {index} out of range for register of size {size}"
                )
            }
            ParseErrorKind::DuplicateOperand(q) => write!(f, "qubit {q} used twice in one gate"),
            ParseErrorKind::BadParams {
                gate,
                expected,
                found,
            } => write!(f, "`{gate}` takes {expected} parameter(s), got {found}"),
            ParseErrorKind::MultipleQreg => f.write_str("only one qreg is supported"),
            ParseErrorKind::MissingQreg => f.write_str("gate used before any qreg declaration"),
        }
    }
}

impl core::error::Error for ParseError {}

struct Statement<'a> {
    line: usize,
    text: &'a str,
}

/// Splits source into `;`-terminated statements, dropping `//` comments.
fn statements(src: &str) -> Result<Vec<Statement<'_>>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    let mut line = 1;
    let mut start: Option<(usize, usize)> = None;
    while i < bytes.len() {
        match bytes[i] {
            b'/' if bytes.get(i + 1) == Some(&b'/') => {
                if start.is_some() {
                    // Statements are sliced from the source, so they cannot contain comments.
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::Syntax("comment inside a statement".into()),
                    });
                }
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'\n' => line += 1,
            b';' => {
                let (s, l) = start.take().unwrap_or((i, line));
                out.push(Statement {
                    line: l,
                    text: src[s..i].trim(),
                });
            }
            c if !c.is_ascii_whitespace() && start.is_none() => start = Some((i, line)),
            _ => {}
        }
        i += 1;
    }
    if let Some((s, l)) = start {
        return Err(ParseError {
            line: l,
            kind: ParseErrorKind::Syntax(format!("unterminated statement `{}`", src[s..].trim())),
        });
    }
    Ok(out)
}

struct Parser {
    qreg: Option<(String, usize)>,
    cregs: Vec<(String, usize)>,
    gates: Vec<Gate>,
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

fn split_keyword(text: &str) -> (&str, &str) {
    let end = text
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(text.len());
    (&text[..end], text[end..].trim_start())
}

/// Parses `name[size]` declarations.
fn parse_decl(line: usize, rest: &str) -> Result<(String, usize), ParseError> {
    let open = rest.find('[').ok_or_else(|| syntax(line, "expected `[`"))?;
    let close = rest.find(']').ok_or_else(|| syntax(line, "expected `]`"))?;
    let name = rest[..open].trim();
    if name.is_empty() || close < open || !rest[close + 1..].trim().is_empty() {
        return Err(syntax(line, format!("malformed declaration `{rest}`")));
    }
    let size = rest[open + 1..close]
        .trim()
        .parse::<usize>()
        .map_err(|_| syntax(line, "register size must be a non-negative integer"))?;
    Ok((name.to_string(), size))
}

impl Parser {
    fn statement(&mut self, st: &Statement<'_>) -> Result<(), ParseError> {
        let line = st.line;
        let (kw, rest) = split_keyword(st.text);
        match kw {
            "OPENQASM" => {
                if rest.trim() != "2.0" {
                    return Err(syntax(line, format!("unsupported version `{rest}`")));
                }
            }
            "include" => {}
            "qreg" => {
                if self.qreg.is_some() {
                    return Err(ParseError {
                        line,
                        kind: ParseErrorKind::MultipleQreg,
                    });
                }
                self.qreg = Some(parse_decl(line, rest)?);
            }
            "creg" => self.cregs.push(parse_decl(line, rest)?),
            "measure" => {
                let (src, dst) = rest
                    .split_once("->")
                    .ok_or_else(|| syntax(line, "measure needs `->`"))?;
                self.check_creg(line, dst.trim())?;
                for q in self.operand(line, src.trim())? {
                    self.gates
                        .push(Gate::new(GateKind::Measure, vec![q], Vec::new()).with_line(line));
                }
            }
            "barrier" => {
                let mut qubits = Vec::new();
                for arg in rest.split(',') {
                    for q in self.operand(line, arg.trim())? {
                        if !qubits.contains(&q) {
                            qubits.push(q);
                        }
                    }
                }
                self.gates
                    .push(Gate::new(GateKind::Barrier, qubits, Vec::new()).with_line(line));
            }
            "gate" | "opaque" | "if" | "reset" => {
                return Err(syntax(line, format!("`{kw}` statements are not supported")));
            }
            "" => return Err(syntax(line, format!("unexpected `{}`", st.text))),
            name => self.gate(line, name, rest)?,
        }
        Ok(())
    }

    fn check_creg(&self, line: usize, arg: &str) -> Result<(), ParseError> {
        let name = arg.split('[').next().unwrap_or("").trim();
        if self.cregs.iter().any(|(n, _)| n == name) {
            Ok(())
        } else {
            Err(syntax(line, format!("unknown classical register `{name}`")))
        }
    }

    /// Resolves `q[i]` to `[i]` and a bare `q` to every qubit of the register.
    fn operand(&self, line: usize, arg: &str) -> Result<Vec<usize>, ParseError> {
        let (reg, size) = self.qreg.as_ref().ok_or(ParseError {
            line,
            kind: ParseErrorKind::MissingQreg,
        })?;
        let (name, index) = match arg.split_once('[') {
            Some((name, idx)) => {
                let idx = idx
                    .strip_suffix(']')
                    .ok_or_else(|| syntax(line, format!("malformed operand `{arg}`")))?;
                let index = idx
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| syntax(line, format!("malformed index in `{arg}`")))?;
                (name.trim(), Some(index))
            }
            None => (arg, None),
        };
        if name != reg {
            return Err(syntax(line, format!("unknown quantum register `{name}`")));
        }
        match index {
            Some(i) if i >= *size => Err(ParseError {
                line,
                kind: ParseErrorKind::QubitOutOfRange {
                    index: i,
                    size: *size,
                },
            }),
            Some(i) => Ok(vec![i]),
            None => Ok((0..*size).collect()),
        }
    }

    fn gate(&mut self, line: usize, name: &str, rest: &str) -> Result<(), ParseError> {
        let kind = match name {
            "U" => GateKind::U3,
            "CX" => GateKind::Cx,
            _ => name
                .parse::<GateKind>()
                .ok()
                .filter(|k| *k != GateKind::Measure && *k != GateKind::Barrier)
                .filter(|_| {
                    name.chars()
                        .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
                })
                .ok_or_else(|| ParseError {
                    line,
                    kind: ParseErrorKind::UnknownGate(name.to_string()),
                })?,
        };
        let (params, args) = if let Some(body) = rest.strip_prefix('(') {
            let close = matching_paren(body).ok_or_else(|| syntax(line, "unbalanced `(`"))?;
            let params = body[..close]
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|e| eval_expr(e).map_err(|m| syntax(line, m)))
                .collect::<Result<Vec<_>, _>>()?;
            (params, body[close + 1..].trim())
        } else {
            (Vec::new(), rest)
        };
        if params.len() != kind.num_params() {
            return Err(ParseError {
                line,
                kind: ParseErrorKind::BadParams {
                    gate: kind,
                    expected: kind.num_params(),
                    found: params.len(),
                },
            });
        }
        let operands = args
            .split(',')
            .map(|a| self.operand(line, a.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        let arity = kind.arity().unwrap_or(operands.len());
        if operands.len() != arity {
            return Err(syntax(
                line,
                format!("`{kind}` takes {arity} operand(s), got {}", operands.len()),
            ));
        }
        if arity == 1 {
            // Single-qubit gates broadcast over a whole register.
            for q in &operands[0] {
                self.gates
                    .push(Gate::new(kind, vec![*q], params.clone()).with_line(line));
            }
            return Ok(());
        }
        let mut qubits = Vec::with_capacity(arity);
        for op in operands {
            if op.len() != 1 {
                return Err(syntax(
                    line,
                    "register broadcast is only supported for single-qubit gates",
                ));
            }
            if qubits.contains(&op[0]) {
                return Err(ParseError {
                    line,
                    kind: ParseErrorKind::DuplicateOperand(op[0]),
                });
            }
            qubits.push(op[0]);
        }
        self.gates
            .push(Gate::new(kind, qubits, params).with_line(line));
        Ok(())
    }
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' if depth == 0 => return Some(i),
            ')' => depth -= 1,
            _ => {}
        }
    }
    None
}

/// Parses a program in the supported OpenQASM 2.0 subset.
pub fn parse_program(text: &str) -> Result<Circuit, ParseError> {
    let mut parser = Parser {
        qreg: None,
        cregs: Vec::new(),
        gates: Vec::new(),
    };
    for st in statements(text)? {
        parser.statement(&st)?;
    }
    let (register_name, num_qubits) = parser.qreg.unwrap_or_else(|| (String::from("q"), 0));
    Ok(Circuit {
        num_qubits,
        gates: parser.gates,
        register_name,
    })
}

/// Serializes a circuit. With `decompose_swap`, each SWAP becomes three CX.
pub fn emit_program(circuit: &Circuit, decompose_swap: bool) -> String {
    let reg = &circuit.register_name;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "// routed-by: codar-router {}",
        env!("CARGO_PKG_VERSION")
    );
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg {reg}[{}];", circuit.num_qubits);
    if circuit.gates.iter().any(|g| g.kind == GateKind::Measure) {
        let _ = writeln!(out, "creg c[{}];", circuit.num_qubits);
    }
    for g in &circuit.gates {
        match g.kind {
            GateKind::Swap if decompose_swap => {
                let (a, b) = (g.qubits[0], g.qubits[1]);
                let _ = writeln!(out, "cx {reg}[{a}],{reg}[{b}];");
                let _ = writeln!(out, "cx {reg}[{b}],{reg}[{a}];");
                let _ = writeln!(out, "cx {reg}[{a}],{reg}[{b}];");
            }
            GateKind::Measure => {
                let q = g.qubits[0];
                let _ = writeln!(out, "measure {reg}[{q}] -> c[{q}];");
            }
            kind => {
                out.push_str(kind.name());
                if !g.params.is_empty() {
                    out.push('(');
                    for (i, p) in g.params.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        let _ = write!(out, "{p}");
                    }
                    out.push(')');
                }
                for (i, q) in g.qubits.iter().enumerate() {
                    out.push_str(if i == 0 { " " } else { "," });
                    let _ = write!(out, "{reg}[{q}]");
                }
                out.push_str(";\n");
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    TooManyQubits {
        needed: usize,
        available: usize,
    },
    BadParams {
        gate: usize,
        expected: usize,
        found: usize,
    },
    BadArity {
        gate: usize,
        expected: usize,
        found: usize,
    },
    QubitOutOfRange {
        gate: usize,
        qubit: usize,
    },
    DuplicateOperand {
        gate: usize,
        qubit: usize,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::TooManyQubits { needed, available } => write!(
                f,
                "circuit needs {needed} qubits but the architecture has {available}"
            ),
            Diagnostic::BadParams {
                gate,
                expected,
                found,
            } => write!(
                f,
                "gate #{gate}: expected {expected} parameter(s), found {found}"
            ),
            Diagnostic::BadArity {
                gate,
                expected,
                found,
            } => write!(
                f,
                "gate #{gate}: expected {expected} operand(s), found {found}"
            ),
            Diagnostic::QubitOutOfRange { gate, qubit } => {
                write!(f, "gate #{gate}: qubit {qubit} out of range")
            }
            Diagnostic::DuplicateOperand { gate, qubit } => {
                write!(f, "gate #{gate}: qubit {qubit} repeated")
            }
        }
    }
}

/// Checks the per-gate invariants and that the circuit fits `arch_qubits`.
pub fn validate(circuit: &Circuit, arch_qubits: usize) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    if circuit.num_qubits > arch_qubits {
        diags.push(Diagnostic::TooManyQubits {
            needed: circuit.num_qubits,
            available: arch_qubits,
        });
    }
    for (i, g) in circuit.gates.iter().enumerate() {
        if g.params.len() != g.kind.num_params() {
            diags.push(Diagnostic::BadParams {
                gate: i,
                expected: g.kind.num_params(),
                found: g.params.len(),
            });
        }
        if let Some(n) = g.kind.arity() {
            if g.qubits.len() != n {
                diags.push(Diagnostic::BadArity {
                    gate: i,
                    expected: n,
                    found: g.qubits.len(),
                });
            }
        }
        for (j, &q) in g.qubits.iter().enumerate() {
            if q >= circuit.num_qubits {
                diags.push(Diagnostic::QubitOutOfRange { gate: i, qubit: q });
            }
            if g.qubits[..j].contains(&q) {
                diags.push(Diagnostic::DuplicateOperand { gate: i, qubit: q });
            }
        }
    }
    diags
}

// ---------------------------------------------------------------------------
// Parameter expressions: numbers, `pi`, + - * / ^, unary minus, parentheses.

struct Expr<'a> {
    src: &'a [u8],
    pos: usize,
}

fn eval_expr(text: &str) -> Result<f64, String> {
    let mut e = Expr {
        src: text.as_bytes(),
        pos: 0,
    };
    let v = e.sum()?;
    e.skip_ws();
    if e.pos != e.src.len() {
        return Err(format!("unexpected input in parameter `{}`", text.trim()));
    }
    Ok(v)
}

impl Expr<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<f64, String> {
        let mut v = self.product()?;
        loop {
            if self.eat(b'+') {
                v += self.product()?;
            } else if self.eat(b'-') {
                v -= self.product()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn product(&mut self) -> Result<f64, String> {
        let mut v = self.unary()?;
        loop {
            if self.eat(b'*') {
                v *= self.unary()?;
            } else if self.eat(b'/') {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, String> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.unary()?;
            return Ok(libm::pow(base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<f64, String> {
        self.skip_ws();
        if self.eat(b'(') {
            let v = self.sum()?;
            if !self.eat(b')') {
                return Err("expected `)` in parameter".into());
            }
            return Ok(v);
        }
        let start = self.pos;
        if self.src[start..].starts_with(b"pi") {
            self.pos += 2;
            return Ok(core::f64::consts::PI);
        }
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let exp_sign = (c == b'-' || c == b'+')
                && self.pos > start
                && matches!(self.src[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        let lit = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        lit.parse::<f64>()
            .map_err(|_| format!("malformed number `{lit}`"))
    }
}
