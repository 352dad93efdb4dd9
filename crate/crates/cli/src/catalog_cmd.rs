use liedeform_core::catalog::standard_catalog;
use liedeform_core::{catalog, CatalogName};
use serde_json::json;

use crate::report::Report;
use crate::scenarios::BUILTIN;

fn aliases(name: &CatalogName) -> Vec<String> {
    match *name {
        CatalogName::MuellerRoemer7 => vec!["mueller_roemer7".into()],
        CatalogName::Abelian(m) => vec![format!("abelian({m})")],
        CatalogName::Heisenberg(d) => vec![format!("heisenberg({d})")],
        CatalogName::St(n) => vec![format!("st({n})")],
        CatalogName::StPrime(n) => vec![format!("st_prime({n})")],
        CatalogName::StComplex(n) => vec![format!("st_complex({n})")],
        CatalogName::SlComplex(n) => vec![format!("sl_complex({n})")],
        _ => vec![],
    }
}

pub fn list(seed: u64) -> Report {
    let mut report = Report::new("catalog list", seed);
    let algebras: Vec<_> = standard_catalog()
        .iter()
        .map(|name| {
            let dim = catalog(name).map(|g| g.dim()).ok();
            json!({
                "id": name.id(),
                "aliases": aliases(name),
                "dim": dim,
                "description": name.description(),
            })
        })
        .collect();
    let scenarios: Vec<_> = BUILTIN
        .iter()
        .map(|(name, kind, _)| json!({"id": format!("builtin:{name}"), "command": kind}))
        .collect();
    report.note(
        "identifiers also accept sizes outside this list, for example st7 or h7; \
         N<n> is n<n> plus a one-dimensional abelian summand",
    );
    report.result = json!({"algebras": algebras, "scenarios": scenarios});
    report
}
