use clap::Parser;
use gerbe::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (code, report) = run(&cli);
    if code == 0 {
        print!("{report}");
    } else {
        eprint!("{report}");
    }
    std::process::exit(code);
}
