//! Line-oriented model text format.
//!
//! ```text
//! # comment
//! model example2
//! thetas theta1 theta2
//! samples 1 2 3 4
//! theta1 1/6 1/6 2/6 2/6
//! theta2 1/12 3/12 5/12 3/12
//! ```

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::FiniteModel;
use crate::rational::{format_exact, parse_rational};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a model; invariant violations surface as the model's own errors.
pub fn parse_model(text: &str) -> Result<FiniteModel> {
    let mut lines = text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        (!content.is_empty()).then(|| (i + 1, content))
    });

    let mut header = |keyword: &str| -> Result<(usize, Vec<String>)> {
        let (line, content) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("missing `{keyword}` line")))?;
        let mut words = content.split_whitespace();
        if words.next() != Some(keyword) {
            return Err(parse_err(line, format!("expected `{keyword}`")));
        }
        Ok((line, words.map(str::to_string).collect()))
    };

    let (line, name) = header("model")?;
    if name.len() != 1 {
        return Err(parse_err(line, "`model` takes exactly one name"));
    }
    let (_, thetas) = header("thetas")?;
    let (_, samples) = header("samples")?;

    let mut probs = Vec::with_capacity(thetas.len());
    for theta in &thetas {
        let (line, content) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("missing row for `{theta}`")))?;
        let mut words = content.split_whitespace();
        let label = words.next().unwrap_or_default();
        if label != theta {
            return Err(parse_err(
                line,
                format!("expected row `{theta}`, found `{label}`"),
            ));
        }
        let row = words
            .map(|w| {
                parse_rational(w).map_err(|_| parse_err(line, format!("invalid rational `{w}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if row.len() != samples.len() {
            return Err(parse_err(
                line,
                format!("{} entries for {} sample points", row.len(), samples.len()),
            ));
        }
        probs.push(row);
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_err(line, "unexpected trailing content"));
    }
    Ok(FiniteModel::new(thetas, samples, probs)?.with_name(name[0].clone()))
}

/// Writes a model in the text format; `parse_model` reads it back unchanged.
pub fn render_model(model: &FiniteModel) -> String {
    let mut out = format!("model {}\n", model.name());
    out.push_str(&format!("thetas {}\n", model.theta_labels().join(" ")));
    out.push_str(&format!("samples {}\n", model.sample_labels().join(" ")));
    for (theta, row) in model.theta_labels().iter().zip(model.rows()) {
        out.push_str(theta);
        for value in row {
            out.push(' ');
            out.push_str(&format_exact(value));
        }
        out.push('\n');
    }
    out
}

/// Short SHA-256 digest of the rendered model, used to identify corpus members.
pub fn content_hash(model: &FiniteModel) -> String {
    let digest = Sha256::digest(render_model(model).as_bytes());
    digest[..6].iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{example1_model, example2_model};
    use crate::rational::ratio;

    #[test]
    fn parses_example2() {
        let text = "# Example\nmodel example2\nthetas theta1 theta2\nsamples 1 2 3 4\n\
                    theta1 1/6 1/6 2/6 2/6   # first row\n\
                    theta2 1/12 3/12 5/12 3/12\n";
        let m = parse_model(text).unwrap();
        assert_eq!(m, example2_model());
        assert_eq!(m.name(), "example2");
    }

    #[test]
    fn round_trips() {
        let m = example1_model(&ratio(1, 100)).unwrap();
        let again = parse_model(&render_model(&m)).unwrap();
        assert_eq!(again, m);
        assert_eq!(again.name(), m.name());
    }

    #[test]
    fn integers_are_accepted() {
        let m = parse_model("model one\nthetas t\nsamples a b\nt 1 0\n");
        assert!(matches!(m, Err(Error::DeadSamplePoint(ref l)) if l == "b"));
        let m = parse_model("model one\nthetas t\nsamples a\nt 1\n").unwrap();
        assert_eq!(m.num_samples(), 1);
    }

    #[test]
    fn structural_errors_carry_lines() {
        let cases = [
            ("thetas a\n", 1),
            ("model m\nthetas a\nsamples x y\na 1/2\n", 4),
            ("model m\nthetas a\nsamples x y\nb 1/2 1/2\n", 4),
            ("model m\nthetas a\nsamples x y\na 1/2 half\n", 4),
            ("model m\nthetas a\nsamples x\na 1\nextra\n", 5),
        ];
        for (text, line) in cases {
            match parse_model(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn invariant_errors_pass_through() {
        let m = parse_model("model m\nthetas a b\nsamples x y\na 1/2 1/2\nb 1/3 1/3\n");
        assert!(matches!(m, Err(Error::RowSum { .. })));
        let m = parse_model("model m\nthetas a\nsamples x x\na 1/2 1/2\n");
        assert_eq!(m.unwrap_err(), Error::DuplicateLabel("x".into()));
    }

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        let a = content_hash(&example2_model());
        assert_eq!(a.len(), 12);
        assert_eq!(a, content_hash(&example2_model()));
        assert_ne!(a, content_hash(&example1_model(&ratio(1, 100)).unwrap()));
    }
}
