//! Membership in dissociated families with relation certificates, exact
//! additive dimension and spanning witnesses.
use halab::dissociation::{
    additive_dimension, check_membership, greedy_family_subset, spanning_witness, verify_dim_bound, FamilySpec,
    SubsetMode,
};

fn main() -> halab::Result<()> {
    let n = 101;
    let spec = FamilySpec::classical(n);
    let cert = check_membership(&[1, 2, 3], &spec)?;
    println!("{{1,2,3}}: {}", serde_json::to_string(&cert)?);
    println!(
        "{{1,2,4,8}} dissociated: {}",
        check_membership(&[1, 2, 4, 8], &spec)?.is_dissociated()
    );

    let set: Vec<usize> = (1..=12).collect();
    let basis = greedy_family_subset(&set, &spec)?;
    println!("greedy basis of 1..=12: {basis:?}");
    let w = spanning_witness(11, &basis, &spec)?;
    println!(
        "11 = {:?} (x_coeff {}, verified {})",
        w.terms,
        w.x_coeff,
        w.verify(&spec)?
    );
    println!("dim(1..=12) = {}", additive_dimension(&set, n, SubsetMode::Exact)?);

    let l2 = FamilySpec::lambda_ks(n, 2, 2)?;
    println!(
        "Λ(2,2) on {{1,2}}: {}",
        serde_json::to_string(&check_membership(&[1, 2], &l2)?)?
    );

    let r = verify_dim_bound(&[3, 10, 11, 50, 51, 52, 90], 257, 10.0)?;
    println!("dimension bound: {}", serde_json::to_string(&r)?);
    Ok(())
}
