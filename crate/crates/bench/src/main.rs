use clap::Parser;
use hcbench::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let code = match run(cli, &mut stdout.lock()) {
        Ok(()) => hcbench::error::EXIT_OK,
        Err(e) => {
            eprintln!("hcbench: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
