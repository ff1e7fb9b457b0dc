//! Variable substitutions `X -> (Γ ∪ 𝒳)*` and their composition.

use serde::Serialize;

/// A token of a substitution image: an output letter or a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Token {
    Letter(usize),
    Var(usize),
}

/// A substitution over a fixed variable set, stored as one image per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Substitution {
    images: Vec<Vec<Token>>,
}

impl Substitution {
    pub fn identity(num_vars: usize) -> Self {
        Substitution {
            images: (0..num_vars).map(|x| vec![Token::Var(x)]).collect(),
        }
    }

    pub fn from_images(images: Vec<Vec<Token>>) -> Self {
        Substitution { images }
    }

    pub fn num_vars(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, var: usize) -> &[Token] {
        &self.images[var]
    }

    pub fn images(&self) -> &[Vec<Token>] {
        &self.images
    }

    /// Homomorphic extension: letters stay, each variable `Y` is replaced by `self(Y)`.
    pub fn apply(&self, tokens: &[Token]) -> Vec<Token> {
        let mut out = Vec::with_capacity(tokens.len());
        for t in tokens {
            match *t {
                Token::Letter(_) => out.push(*t),
                Token::Var(y) => out.extend_from_slice(&self.images[y]),
            }
        }
        out
    }

    /// `first ∘ second`: maps `X` to `first^(second(X))`.
    pub fn compose(first: &Substitution, second: &Substitution) -> Substitution {
        debug_assert_eq!(first.num_vars(), second.num_vars());
        Substitution {
            images: second.images.iter().map(|img| first.apply(img)).collect(),
        }
    }

    /// Number of occurrences of variable `y` in the image of `x`.
    pub fn occurrences(&self, x: usize, y: usize) -> usize {
        self.images[x]
            .iter()
            .filter(|t| **t == Token::Var(y))
            .count()
    }

    /// Substitute every variable by ε and keep only the letters.
    pub fn erase(tokens: &[Token]) -> Vec<usize> {
        tokens
            .iter()
            .filter_map(|t| match t {
                Token::Letter(c) => Some(*c),
                Token::Var(_) => None,
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(x, img)| img.len() == 1 && img[0] == Token::Var(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Token::{Letter as L, Var as V};

    // X=0 Y=1 Z=2, a=0 b=1
    fn s(images: Vec<Vec<Token>>) -> Substitution {
        Substitution::from_images(images)
    }

    #[test]
    fn run_table_composition() {
        let rho_a = s(vec![vec![V(0), L(0)], vec![L(0), V(1)], vec![V(2)]]);
        let rho_b = s(vec![vec![V(0)], vec![L(1), V(1)], vec![V(2), L(1)]]);
        let sigma2 = Substitution::compose(&rho_a, &rho_b);
        assert_eq!(
            sigma2,
            s(vec![vec![V(0), L(0)], vec![L(1), L(0), V(1)], vec![V(2), L(1)]])
        );
        let sigma3 = s(vec![
            vec![V(0), L(0), L(0)],
            vec![L(0), L(1), L(0), V(1)],
            vec![V(2), L(1)],
        ]);
        let sigma4 = Substitution::compose(&sigma3, &rho_a);
        assert_eq!(
            sigma4,
            s(vec![
                vec![V(0), L(0), L(0), L(0)],
                vec![L(0), L(0), L(1), L(0), V(1)],
                vec![V(2), L(1)],
            ])
        );
    }

    #[test]
    fn identity_is_neutral() {
        let rho = s(vec![vec![L(0), V(1), V(0)], vec![]]);
        let id = Substitution::identity(2);
        assert_eq!(Substitution::compose(&id, &rho), rho);
        assert_eq!(Substitution::compose(&rho, &id), rho);
        assert!(id.is_identity());
    }
}
