use rug::Integer;

use super::exact::{factor, Exact, Factored, Valuation};
use super::matrix::{Entry, Matrix};
use super::LinalgError;
use crate::precision::BigReal;
use crate::words::Word;

/// Indexed set of square matrices of one dimension; index = symbol value.
#[derive(Clone, Debug)]
pub struct MatrixFamily {
    members: Vec<Matrix<Exact>>,
    valuation: Valuation,
    tag: String,
    warnings: Vec<String>,
}

impl MatrixFamily {
    pub fn new(
        members: Vec<Matrix<Exact>>,
        valuation: Valuation,
        tag: impl Into<String>,
    ) -> Result<Self, LinalgError> {
        let first = members.first().ok_or(LinalgError::EmptyFamily)?;
        let d = first.rows();
        for m in &members {
            if !m.is_square() {
                return Err(LinalgError::NotSquare(m.rows(), m.cols()));
            }
            if m.rows() != d {
                return Err(LinalgError::DimensionMismatch { left: (d, d), right: (m.rows(), m.cols()) });
            }
            for e in m.data() {
                for s in e.symbols() {
                    if !valuation.contains_key(&s) {
                        return Err(LinalgError::MissingSymbol(s));
                    }
                }
            }
        }
        Ok(MatrixFamily { members, valuation, tag: tag.into(), warnings: Vec::new() })
    }

    pub fn with_warning(mut self, w: impl Into<String>) -> Self {
        self.warnings.push(w.into());
        self
    }

    pub fn members(&self) -> &[Matrix<Exact>] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Matrix<Exact> {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].rows()
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn factored(&self, i: usize) -> Option<Factored> {
        factor(&self.members[i])
    }

    /// Integer patterns, if every member is scalar-factored.
    pub fn patterns(&self) -> Option<Vec<Matrix<Integer>>> {
        self.members.iter().map(|m| factor(m).map(|f| f.pattern)).collect()
    }

    /// Every member multiplied by `c`.
    pub fn scaled(&self, c: &Exact, extra: Valuation) -> Result<Self, LinalgError> {
        let mut val = self.valuation.clone();
        val.extend(extra);
        let members = self.members.iter().map(|m| m.scale(c)).collect();
        MatrixFamily::new(members, val, format!("{}*({})", c, self.tag))
    }

    pub fn numeric(&self, prec: u32) -> Result<Vec<Matrix<BigReal>>, LinalgError> {
        self.members
            .iter()
            .map(|m| m.try_map(|e| if e.is_zero() { Ok(BigReal::zero()) } else { e.evaluate(&self.valuation, prec) }))
            .collect()
    }

    pub fn check_word(&self, w: &Word) -> Result<(), LinalgError> {
        if let Some(&s) = w.symbols().iter().find(|&&s| s as usize >= self.len()) {
            return Err(LinalgError::SymbolOutOfRange { symbol: s, size: self.len() });
        }
        Ok(())
    }

    /// `A_{w_n} ... A_{w_1}` in exact arithmetic.
    pub fn product_along(&self, w: &Word) -> Result<Matrix<Exact>, LinalgError> {
        self.check_word(w)?;
        product_along(&self.members, w.symbols())
    }
}

/// `M_{s_n} ... M_{s_1}`: the first symbol is the rightmost factor.
pub fn product_along<T: Entry>(members: &[Matrix<T>], symbols: &[u32]) -> Result<Matrix<T>, LinalgError> {
    let d = members.first().ok_or(LinalgError::EmptyFamily)?.rows();
    let mut acc = Matrix::identity(d);
    for &s in symbols {
        let m = members
            .get(s as usize)
            .ok_or(LinalgError::SymbolOutOfRange { symbol: s, size: members.len() })?;
        acc = m.multiply(&acc)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::parse_matrix;

    fn btv_one() -> MatrixFamily {
        let a0 = parse_matrix("1,1;0,1").unwrap();
        let a1 = parse_matrix("1,0;1,1").unwrap();
        MatrixFamily::new(vec![a0, a1], Valuation::new(), "btv").unwrap()
    }

    #[test]
    fn order_is_right_to_left() {
        let f = btv_one();
        let w = Word::from_digits("01", 2).unwrap();
        assert_eq!(f.product_along(&w).unwrap(), parse_matrix("1,1;1,2").unwrap());
        let empty = Word::new(vec![], 2).unwrap();
        assert_eq!(f.product_along(&empty).unwrap(), Matrix::identity(2));
        let zeros = Word::new(vec![0; 9], 2).unwrap();
        assert_eq!(f.product_along(&zeros).unwrap(), parse_matrix("1,9;0,1").unwrap());
    }

    #[test]
    fn rejects_bad_members_and_symbols() {
        let f = btv_one();
        assert!(f.product_along(&Word::new(vec![2], 3).unwrap()).is_err());
        let bad = vec![parse_matrix("1,0;0,1").unwrap(), parse_matrix("1").unwrap()];
        assert!(MatrixFamily::new(bad, Valuation::new(), "x").is_err());
        let unvalued = vec![parse_matrix("a").unwrap()];
        assert!(MatrixFamily::new(unvalued, Valuation::new(), "x").is_err());
        assert!(MatrixFamily::new(vec![], Valuation::new(), "x").is_err());
    }
}
