use std::collections::HashSet;
use std::sync::Arc;

use crate::coefficients::FieldDescriptor;
use crate::polynomials::{Monomial, MonomialOrder, PolyError};

/// Variables, coefficient field and monomial order of a polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    variables: Vec<String>,
    field: FieldDescriptor,
    order: MonomialOrder,
}

pub type RingRef = Arc<Ring>;

/// Name reserved for the auxiliary action variable.
pub const RESERVED_VARIABLE: &str = "s";

impl Ring {
    pub fn new<S: AsRef<str>>(variables: &[S], field: FieldDescriptor, order: MonomialOrder) -> Result<RingRef, PolyError> {
        let variables: Vec<String> = variables.iter().map(|v| v.as_ref().to_string()).collect();
        let mut seen = HashSet::new();
        for v in &variables {
            if v == RESERVED_VARIABLE {
                return Err(PolyError::ReservedVariable);
            }
            let valid = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(PolyError::BadVariableName(v.clone()));
            }
            if !seen.insert(v.clone()) {
                return Err(PolyError::DuplicateVariable(v.clone()));
            }
        }
        if variables.is_empty() {
            return Err(PolyError::ArityMismatch { expected: 1, found: 0 });
        }
        Ok(Arc::new(Ring { variables, field, order }))
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    /// Exponent slots per monomial (variables plus any auxiliary slot).
    pub fn nslots(&self) -> usize {
        self.variables.len() + self.order.extra_slots()
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Same variables and order over another field.
    pub fn with_field(&self, field: FieldDescriptor) -> RingRef {
        Arc::new(Ring { variables: self.variables.clone(), field, order: self.order.clone() })
    }

    pub fn one_monomial(&self) -> Monomial {
        Monomial::one(self.nslots())
    }

    pub fn variable_monomial(&self, i: usize) -> Monomial {
        Monomial::var(self.nslots(), i)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            let name = self.variables.get(i).map(String::as_str).unwrap_or(RESERVED_VARIABLE);
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}
