use crate::metamodel::{
    Archetype, Assignment, Construct, IndicatorDomain, Proposition, PropositionKind, Quotation,
    Theory, Variable, VariableRef,
};
use crate::span::{SourceSpan, Span};

use super::lexer::{Token, TokenKind};
use super::ParseError;

const ITEM_KEYWORDS: [&str; 3] = ["construct", "proposition", "archetype"];

/// Marker for "an error was recorded, unwind to the recovery point".
struct Bail;

type PResult<T> = Result<T, Bail>;

pub(super) struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    pub(super) errors: Vec<ParseError>,
}

impl Parser {
    pub(super) fn new(tokens: Vec<Token>) -> Self {
        Self {
            tokens,
            pos: 0,
            depth: 0,
            errors: Vec::new(),
        }
    }

    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span.clone()
    }

    fn bump(&mut self) -> Token {
        let token = self.tokens[self.pos].clone();
        match token.kind {
            TokenKind::LBrace => self.depth += 1,
            TokenKind::RBrace => self.depth = self.depth.saturating_sub(1),
            _ => {}
        }
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        token
    }

    fn at_keyword(&self, keyword: &str) -> bool {
        matches!(self.peek(), TokenKind::Ident(s) if s == keyword)
    }

    fn fail<T>(&mut self, expected: &[&str]) -> PResult<T> {
        let found = self.peek().to_string();
        self.errors
            .push(ParseError::syntax(self.span(), expected, found));
        Err(Bail)
    }

    fn keyword(&mut self, keyword: &str) -> PResult<SourceSpan> {
        if self.at_keyword(keyword) {
            Ok(self.bump().span)
        } else {
            self.fail(&[&format!("'{keyword}'")])
        }
    }

    fn punct(&mut self, kind: TokenKind) -> PResult<()> {
        if *self.peek() == kind {
            self.bump();
            Ok(())
        } else {
            let expected = kind.to_string();
            self.fail(&[&expected])
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            TokenKind::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(&[what]),
        }
    }

    fn string(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            TokenKind::Str(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(&[what]),
        }
    }

    fn indicator_token(&mut self) -> PResult<String> {
        match self.peek().clone() {
            TokenKind::Ident(s) | TokenKind::Str(s) => {
                self.bump();
                Ok(s.trim().to_string())
            }
            _ => self.fail(&["indicator token"]),
        }
    }

    /// Skips to the next item keyword or closing brace of the theory body.
    fn recover(&mut self) {
        loop {
            match self.peek() {
                TokenKind::Eof => return,
                TokenKind::Ident(s) if self.depth <= 1 && ITEM_KEYWORDS.contains(&s.as_str()) => {
                    return
                }
                TokenKind::RBrace if self.depth <= 1 => return,
                _ => {
                    self.bump();
                }
            }
        }
    }

    pub(super) fn theory(&mut self) -> Option<Theory> {
        let start = self.span();
        if self.keyword("theory").is_err() {
            return None;
        }
        let name = self.string("theory name string").ok()?;
        self.punct(TokenKind::LBrace).ok()?;
        let mut theory = Theory::new(name);
        theory.span = Span::at(start);

        loop {
            match self.peek().clone() {
                TokenKind::RBrace => {
                    self.bump();
                    break;
                }
                TokenKind::Eof => {
                    let _ =
                        self.fail::<()>(&["'construct'", "'proposition'", "'archetype'", "`}`"]);
                    return Some(theory);
                }
                TokenKind::Ident(k) if k == "construct" => match self.construct() {
                    Ok(c) => theory.constructs.push(c),
                    Err(Bail) => self.recover(),
                },
                TokenKind::Ident(k) if k == "proposition" => match self.proposition() {
                    Ok(p) => theory.propositions.push(p),
                    Err(Bail) => self.recover(),
                },
                TokenKind::Ident(k) if k == "archetype" => match self.archetype() {
                    Ok(a) => theory.archetypes.push(a),
                    Err(Bail) => self.recover(),
                },
                _ => {
                    let _ =
                        self.fail::<()>(&["'construct'", "'proposition'", "'archetype'", "`}`"]);
                    self.bump();
                    self.recover();
                }
            }
        }
        if *self.peek() != TokenKind::Eof {
            let _ = self.fail::<()>(&["end of input"]);
        }
        Some(theory)
    }

    fn construct(&mut self) -> PResult<Construct> {
        let span = self.keyword("construct")?;
        let name = self.ident("construct name")?;
        let definition = match self.peek().clone() {
            TokenKind::Str(s) => {
                self.bump();
                s
            }
            _ => String::new(),
        };
        self.punct(TokenKind::LBrace)?;
        let mut variables = Vec::new();
        while self.at_keyword("variable") {
            variables.push(self.variable()?);
        }
        if *self.peek() != TokenKind::RBrace {
            return self.fail(&["'variable'", "`}`"]);
        }
        self.bump();
        Ok(Construct {
            name,
            definition,
            variables,
            span: Span::at(span),
        })
    }

    fn variable(&mut self) -> PResult<Variable> {
        let span = self.keyword("variable")?;
        let name = self.ident("variable name")?;
        let label = match self.peek().clone() {
            TokenKind::Str(s) => {
                self.bump();
                Some(s)
            }
            _ => None,
        };
        self.punct(TokenKind::LBrace)?;
        let mut values = vec![self.indicator_token()?];
        while *self.peek() == TokenKind::Comma {
            self.bump();
            values.push(self.indicator_token()?);
        }
        self.punct(TokenKind::RBrace)?;

        let mut domain = IndicatorDomain::new(values);
        loop {
            if self.at_keyword("ordering") {
                let clause = self.span();
                self.bump();
                self.punct(TokenKind::Eq)?;
                let mut order = vec![self.indicator_token()?];
                while *self.peek() == TokenKind::Lt {
                    self.bump();
                    order.push(self.indicator_token()?);
                }
                if domain.ordering.replace(order).is_some() {
                    self.errors.push(ParseError::syntax_message(
                        clause,
                        "ordering declared twice",
                    ));
                    return Err(Bail);
                }
            } else if self.at_keyword("absent") {
                let clause = self.span();
                self.bump();
                self.punct(TokenKind::Eq)?;
                let token = self.indicator_token()?;
                if domain.absence.replace(token).is_some() {
                    self.errors
                        .push(ParseError::syntax_message(clause, "absent declared twice"));
                    return Err(Bail);
                }
            } else {
                break;
            }
        }
        Ok(Variable {
            name,
            label,
            domain,
            span: Span::at(span),
        })
    }

    fn reference(&mut self) -> PResult<VariableRef> {
        let construct = self.ident("construct name")?;
        self.punct(TokenKind::Dot)?;
        match self.peek().clone() {
            TokenKind::Star => {
                self.bump();
                Ok(VariableRef::all(construct))
            }
            TokenKind::Ident(v) => {
                self.bump();
                Ok(VariableRef::variable(construct, v))
            }
            _ => self.fail(&["variable name", "`*`"]),
        }
    }

    fn proposition(&mut self) -> PResult<Proposition> {
        let span = self.keyword("proposition")?;
        let id = self.ident("proposition id")?;
        let kind = match self.peek() {
            TokenKind::Ident(k) if k == "categoric" => PropositionKind::Categoric,
            TokenKind::Ident(k) if k == "sequential" => PropositionKind::Sequential,
            TokenKind::Ident(k) if k == "determinant" => PropositionKind::Determinant,
            _ => return self.fail(&["'categoric'", "'sequential'", "'determinant'"]),
        };
        self.bump();
        let strategic = if self.at_keyword("strategic") {
            self.bump();
            true
        } else if self.at_keyword("taxonomic") {
            self.bump();
            false
        } else {
            true
        };
        self.keyword("relates")?;
        let left = self.reference()?;
        self.punct(TokenKind::Arrow)?;
        let right = self.reference()?;
        self.keyword("text")?;
        let text = self.string("proposition text string")?;
        let mut quotes = Vec::new();
        while self.at_keyword("quote") {
            self.bump();
            let source = self.string("quotation source string")?;
            let excerpt = self.string("quotation excerpt string")?;
            quotes.push(Quotation { source, excerpt });
        }
        let template_override = if self.at_keyword("template") {
            self.bump();
            Some(self.string("template string")?)
        } else {
            None
        };
        Ok(Proposition {
            id,
            kind,
            strategic,
            left,
            right,
            text,
            quotes,
            template_override,
            span: Span::at(span),
        })
    }

    fn archetype(&mut self) -> PResult<Archetype> {
        let span = self.keyword("archetype")?;
        let name = self.ident("archetype name")?;
        self.punct(TokenKind::LBrace)?;
        let mut assignments = Vec::new();
        while let TokenKind::Ident(_) = self.peek() {
            let at = self.span();
            let construct = self.ident("construct name")?;
            self.punct(TokenKind::Dot)?;
            let variable = self.ident("variable name")?;
            self.punct(TokenKind::Eq)?;
            let token = self.indicator_token()?;
            let mut a = Assignment::new(construct, variable, token);
            a.span = Span::at(at);
            assignments.push(a);
        }
        if *self.peek() != TokenKind::RBrace {
            return self.fail(&["assignment", "`}`"]);
        }
        self.bump();
        Ok(Archetype {
            name,
            assignments,
            span: Span::at(span),
        })
    }
}
