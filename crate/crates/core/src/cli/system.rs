//! Line-oriented system files.
//!
//! ```text
//! # two curves
//! ring x y
//! order grevlex
//! field q
//! gen x^2+y^2-1
//! gen x^2+y^3+x*y-2
//! action x+4*y
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coefficients::FieldDescriptor;
use crate::corpus::random_linear_form;
use crate::polynomials::{parse_polynomial, MonomialOrder, Polynomial, Ring, RingRef};

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `ring` line")]
    NoRing,
    #[error("no `gen` lines")]
    NoGenerators,
}

#[derive(Debug, Clone)]
pub struct SystemFile {
    pub ring: RingRef,
    pub generators: Vec<Polynomial>,
    pub action: Option<Polynomial>,
}

impl SystemFile {
    /// Parse `text`; `order` and `field` replace the file's own settings.
    pub fn parse(text: &str, order: Option<MonomialOrder>, field: Option<FieldDescriptor>) -> Result<Self, SystemError> {
        let mut vars: Option<(usize, Vec<String>)> = None;
        let mut file_order = None;
        let mut file_field = None;
        let mut gens = Vec::new();
        let mut action = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            let rest = rest.trim();
            let err = |message: String| SystemError::Syntax { line, message };
            match key {
                "ring" => {
                    if vars.is_some() {
                        return Err(err("second `ring` line".into()));
                    }
                    vars = Some((line, rest.split_whitespace().map(str::to_string).collect()));
                }
                "order" => file_order = Some(rest.parse::<MonomialOrder>().map_err(|_| err(format!("unknown order `{rest}`")))?),
                "field" => file_field = Some(rest.parse::<FieldDescriptor>().map_err(|e| err(e.to_string()))?),
                "gen" => gens.push((line, rest.to_string())),
                "action" => {
                    if action.is_some() {
                        return Err(err("second `action` line".into()));
                    }
                    action = Some((line, rest.to_string()));
                }
                other => return Err(err(format!("unknown keyword `{other}`"))),
            }
        }
        let (ring_line, vars) = vars.ok_or(SystemError::NoRing)?;
        if gens.is_empty() {
            return Err(SystemError::NoGenerators);
        }
        let order = order.or(file_order).unwrap_or_default();
        let field = field.or(file_field).unwrap_or(FieldDescriptor::Rational);
        let ring = Ring::new(&vars, field, order).map_err(|e| SystemError::Syntax { line: ring_line, message: e.to_string() })?;
        let parse = |(line, src): &(usize, String)| {
            parse_polynomial(src, &ring).map_err(|e| SystemError::Syntax { line: *line, message: e.to_string() })
        };
        let generators = gens.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        let action = action.as_ref().map(parse).transpose()?;
        Ok(SystemFile { ring, generators, action })
    }

    /// Instance data for a template: the file's own field, the template's order.
    pub fn parse_instance(text: &str, order: &MonomialOrder) -> Result<Self, SystemError> {
        let field = Self::parse(text, None, None)?.ring.field();
        Self::parse(text, Some(order.clone()), Some(field))
    }

    /// The file's action form, else a random linear form drawn from `seed`.
    pub fn action_or_random(&self, seed: u64) -> Polynomial {
        self.action.clone().unwrap_or_else(|| random_linear_form(&self.ring, &mut ChaCha8Rng::seed_from_u64(seed)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLES: &str = "# two curves\nring x y\norder grevlex\nfield q\ngen x^2+y^2-1\ngen x^2+y^3+x*y-2   # cubic\naction x+4*y\n";

    #[test]
    fn parses_circles() {
        let s = SystemFile::parse(CIRCLES, None, None).unwrap();
        assert_eq!(s.ring.variables(), ["x", "y"]);
        assert_eq!(s.generators.len(), 2);
        assert_eq!(s.action.unwrap().to_string(), "x + 4*y");
    }

    #[test]
    fn overrides_apply() {
        let s = SystemFile::parse(CIRCLES, Some(MonomialOrder::Lex), Some(FieldDescriptor::Prime(101))).unwrap();
        assert_eq!(*s.ring.order(), MonomialOrder::Lex);
        assert_eq!(s.ring.field(), FieldDescriptor::Prime(101));
    }

    #[test]
    fn random_action_is_seeded() {
        let s = SystemFile::parse("ring x y z\ngen x\ngen y\ngen z\n", None, None).unwrap();
        let a = s.action_or_random(9);
        assert_eq!(a, s.action_or_random(9));
        assert_eq!(a.terms().len(), 3);
        assert_eq!(a.degree(), Some(1));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "ring x y\ngen x^2+\n";
        match SystemFile::parse(bad, None, None) {
            Err(SystemError::Syntax { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(SystemFile::parse("gen x\n", None, None), Err(SystemError::NoRing)));
        assert!(matches!(SystemFile::parse("ring x\n", None, None), Err(SystemError::NoGenerators)));
        assert!(matches!(SystemFile::parse("ring x s\ngen x\n", None, None), Err(SystemError::Syntax { line: 1, .. })));
        assert!(matches!(SystemFile::parse("ring x\nfoo 1\n", None, None), Err(SystemError::Syntax { line: 2, .. })));
    }
}
