use serde::Serialize;

use crate::lattice::{LatticeDomain, WlpExpression, MAX_ARITY};

/// Byte range of a token or construct, with the 1-based line and column of
/// its start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub begin: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl std::fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{kind}: {} (line {}, column {})",
            self.message, self.span.line, self.span.column
        )
    }
}

/// A successful parse: the expression, the system arity (the largest
/// component index mentioned), and any warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseOutcome {
    pub expr: WlpExpression,
    pub arity: usize,
    pub warnings: Vec<ParseDiagnostic>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum TokenKind {
    Component(usize),
    Number(f64),
    Min,
    Max,
    Amp,
    Pipe,
    LParen,
    RParen,
    Comma,
    Eof,
}

impl TokenKind {
    fn describe(&self) -> String {
        match self {
            TokenKind::Component(k) => format!("component x{k}"),
            TokenKind::Number(v) => format!("number {v}"),
            TokenKind::Min => "'min'".into(),
            TokenKind::Max => "'max'".into(),
            TokenKind::Amp => "'&'".into(),
            TokenKind::Pipe => "'|'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::Comma => "','".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Token {
    kind: TokenKind,
    begin: usize,
    end: usize,
}

fn span_at(source: &str, begin: usize, end: usize) -> SourceSpan {
    let mut line = 1;
    let mut col = 1;
    for (i, c) in source.char_indices() {
        if i >= begin {
            break;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    SourceSpan {
        begin,
        end,
        line,
        column: col,
    }
}

struct Lexer<'a> {
    source: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(source: &'a str) -> Self {
        Self { source, pos: 0 }
    }

    fn error(&self, begin: usize, end: usize, message: String) -> ParseDiagnostic {
        ParseDiagnostic {
            severity: Severity::Error,
            message,
            span: span_at(self.source, begin, end),
        }
    }

    fn next_token(&mut self) -> Result<Token, ParseDiagnostic> {
        let bytes = self.source.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let begin = self.pos;
        if self.pos >= bytes.len() {
            return Ok(Token {
                kind: TokenKind::Eof,
                begin,
                end: begin,
            });
        }
        let c = bytes[self.pos];
        let single = |kind| Token {
            kind,
            begin,
            end: begin + 1,
        };
        match c {
            b'&' => {
                self.pos += 1;
                Ok(single(TokenKind::Amp))
            }
            b'|' => {
                self.pos += 1;
                Ok(single(TokenKind::Pipe))
            }
            b'(' => {
                self.pos += 1;
                Ok(single(TokenKind::LParen))
            }
            b')' => {
                self.pos += 1;
                Ok(single(TokenKind::RParen))
            }
            b',' => {
                self.pos += 1;
                Ok(single(TokenKind::Comma))
            }
            b'0'..=b'9' | b'.' => self.lex_number(begin),
            b'-' => {
                if self.pos + 1 < bytes.len()
                    && (bytes[self.pos + 1].is_ascii_digit() || bytes[self.pos + 1] == b'.')
                {
                    self.lex_number(begin)
                } else if self.source[self.pos..].starts_with("-inf") {
                    self.pos += 4;
                    Ok(Token {
                        kind: TokenKind::Number(f64::NEG_INFINITY),
                        begin,
                        end: self.pos,
                    })
                } else {
                    Err(self.error(begin, begin + 1, "unexpected '-'".into()))
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => self.lex_word(begin),
            other => Err(self.error(
                begin,
                begin + 1,
                format!("unexpected character {:?}", other as char),
            )),
        }
    }

    fn lex_number(&mut self, begin: usize) -> Result<Token, ParseDiagnostic> {
        let bytes = self.source.as_bytes();
        let mut pos = self.pos;
        if bytes[pos] == b'-' {
            pos += 1;
        }
        while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'.') {
            pos += 1;
        }
        if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
            let mut exp = pos + 1;
            if exp < bytes.len() && (bytes[exp] == b'+' || bytes[exp] == b'-') {
                exp += 1;
            }
            if exp < bytes.len() && bytes[exp].is_ascii_digit() {
                pos = exp;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
            }
        }
        let text = &self.source[begin..pos];
        let value: f64 = text
            .parse()
            .map_err(|e| self.error(begin, pos, format!("invalid number {text:?}: {e}")))?;
        self.pos = pos;
        Ok(Token {
            kind: TokenKind::Number(value),
            begin,
            end: pos,
        })
    }

    fn lex_word(&mut self, begin: usize) -> Result<Token, ParseDiagnostic> {
        let bytes = self.source.as_bytes();
        let mut pos = self.pos;
        while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
            pos += 1;
        }
        let word = &self.source[begin..pos];
        self.pos = pos;
        let kind = match word {
            "min" => TokenKind::Min,
            "max" => TokenKind::Max,
            "inf" => TokenKind::Number(f64::INFINITY),
            _ => {
                if let Some(rest) = word.strip_prefix('x') {
                    if rest.is_empty() {
                        return Err(self.error(
                            begin,
                            pos,
                            "expected a component index after 'x'".into(),
                        ));
                    }
                    let index: usize = rest.parse().map_err(|_| {
                        self.error(begin, pos, format!("invalid component index {rest:?}"))
                    })?;
                    if index == 0 {
                        return Err(self.error(
                            begin,
                            pos,
                            "component index must be at least 1".into(),
                        ));
                    }
                    if index > MAX_ARITY {
                        return Err(self.error(
                            begin,
                            pos,
                            format!("component index {index} exceeds the maximum of {MAX_ARITY}"),
                        ));
                    }
                    TokenKind::Component(index)
                } else {
                    return Err(self.error(begin, pos, format!("unknown identifier {word:?}")));
                }
            }
        };
        Ok(Token {
            kind,
            begin,
            end: pos,
        })
    }
}

struct Parser<'a> {
    source: &'a str,
    lexer: Lexer<'a>,
    token: Token,
    domain: LatticeDomain,
}

impl<'a> Parser<'a> {
    fn new(source: &'a str, domain: LatticeDomain) -> Result<Self, ParseDiagnostic> {
        let mut lexer = Lexer::new(source);
        let token = lexer.next_token()?;
        Ok(Self {
            source,
            lexer,
            token,
            domain,
        })
    }

    fn error_at(&self, token: Token, message: String) -> ParseDiagnostic {
        ParseDiagnostic {
            severity: Severity::Error,
            message,
            span: span_at(self.source, token.begin, token.end),
        }
    }

    fn advance(&mut self) -> Result<Token, ParseDiagnostic> {
        let current = self.token;
        self.token = self.lexer.next_token()?;
        Ok(current)
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token, ParseDiagnostic> {
        if self.token.kind == kind {
            self.advance()
        } else {
            Err(self.error_at(
                self.token,
                format!("expected {what}, found {}", self.token.kind.describe()),
            ))
        }
    }

    fn expr(&mut self) -> Result<WlpExpression, ParseDiagnostic> {
        let mut acc = self.term()?;
        while self.token.kind == TokenKind::Pipe {
            self.advance()?;
            let rhs = self.term()?;
            acc = WlpExpression::join(acc, rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<WlpExpression, ParseDiagnostic> {
        let mut acc = self.factor()?;
        while self.token.kind == TokenKind::Amp {
            self.advance()?;
            let rhs = self.factor()?;
            acc = WlpExpression::meet(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<WlpExpression, ParseDiagnostic> {
        let token = self.token;
        match token.kind {
            TokenKind::Component(index) => {
                self.advance()?;
                Ok(WlpExpression::projection(index))
            }
            TokenKind::Number(value) => {
                self.advance()?;
                if !self.domain.contains(value) {
                    return Err(self.error_at(
                        token,
                        format!("constant {value} outside lattice domain {}", self.domain),
                    ));
                }
                Ok(WlpExpression::constant(value))
            }
            TokenKind::Min => {
                self.advance()?;
                self.nary(WlpExpression::meet)
            }
            TokenKind::Max => {
                self.advance()?;
                self.nary(WlpExpression::join)
            }
            TokenKind::LParen => {
                self.advance()?;
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.error_at(
                token,
                format!(
                    "expected a component, constant, 'min', 'max', or '(', found {}",
                    token.kind.describe()
                ),
            )),
        }
    }

    fn nary(
        &mut self,
        combine: fn(WlpExpression, WlpExpression) -> WlpExpression,
    ) -> Result<WlpExpression, ParseDiagnostic> {
        self.expect(TokenKind::LParen, "'('")?;
        let mut acc = self.expr()?;
        self.expect(TokenKind::Comma, "',' (min/max take at least two arguments)")?;
        let second = self.expr()?;
        acc = combine(acc, second);
        while self.token.kind == TokenKind::Comma {
            self.advance()?;
            let next = self.expr()?;
            acc = combine(acc, next);
        }
        self.expect(TokenKind::RParen, "')'")?;
        Ok(acc)
    }
}

/// Parse a system description into an expression. On success the outcome
/// holds the expression, the arity implied by the largest component index,
/// and warnings (notably for component indices below the maximum that never
/// appear, a common source of silently wrong arities).
pub fn parse_system(
    source: &str,
    domain: &LatticeDomain,
) -> Result<ParseOutcome, Vec<ParseDiagnostic>> {
    if source.trim().is_empty() {
        return Err(vec![ParseDiagnostic {
            severity: Severity::Error,
            message: "empty system expression".into(),
            span: span_at(source, 0, 0),
        }]);
    }
    let mut parser = Parser::new(source, *domain).map_err(|e| vec![e])?;
    let expr = parser.expr().map_err(|e| vec![e])?;
    if parser.token.kind != TokenKind::Eof {
        return Err(vec![parser.error_at(
            parser.token,
            format!(
                "unexpected {} after the end of the expression",
                parser.token.kind.describe()
            ),
        )]);
    }
    let used = expr.used_indices();
    let arity = used.iter().max().copied().unwrap_or(0);
    let mut warnings = Vec::new();
    for missing in (1..=arity).filter(|k| !used.contains(k)) {
        warnings.push(ParseDiagnostic {
            severity: Severity::Warning,
            message: format!(
                "component x{missing} never appears; it is vacuous in a {arity}-component system"
            ),
            span: span_at(source, 0, source.len()),
        });
    }
    Ok(ParseOutcome {
        expr,
        arity,
        warnings,
    })
}
