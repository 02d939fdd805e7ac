//! Drive a command-line campaign from code and print its JSON report.

use bergman_bloch::cli::{run, CampaignConfig};
use clap::Parser;

fn main() -> bergman_bloch::Result<()> {
    let cfg = CampaignConfig::parse_from([
        "bergman-bloch",
        "thm1",
        "--n",
        "2",
        "--battery",
        "random:3:deg2",
        "--pairs",
        "500",
    ]);
    let outcome = run(&cfg)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&outcome.report).expect("serializable")
    );
    println!("exit code {}", outcome.exit_code);
    Ok(())
}
