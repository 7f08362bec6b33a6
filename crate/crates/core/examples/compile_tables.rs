//! Compile the lookup tables of a builtin curve and print a few of them.
//!
//! cargo run --example compile_tables -- hilbert2d_global

use sfc_core::spec::builtin;
use sfc_core::tables::compile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "hilbert2d_global".into());
    let t = compile(&builtin(&name)?)?;
    println!(
        "{}: b = {}, {} states, {} facets, palindrome = {}",
        t.name, t.b, t.state_count, t.facet_count, t.palindrome
    );

    println!("\nchild states S^c(s, j)");
    for s in 0..t.state_count {
        let row: Vec<&str> = (0..t.b).map(|j| t.labels[t.child(s, j)].as_str()).collect();
        println!("  {:>3}: {}", t.labels[s], row.join(" "));
    }

    println!("\nsibling table N(j, s, f), '-' for none");
    for s in 0..t.state_count {
        for j in 0..t.b {
            let row: Vec<String> =
                (0..t.facets.count(s)).map(|f| t.n(j, s, f).map_or("-".into(), |x| x.to_string())).collect();
            println!("  j={j} s={:<3} {}", t.labels[s], row.join(" "));
        }
    }
    println!("\ncanonical text form: {} bytes", t.to_text().len());
    Ok(())
}
