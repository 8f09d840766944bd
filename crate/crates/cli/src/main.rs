use clap::Parser;
use fzeta_cli::config::RunConfig;

fn main() {
    let cfg = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    if let Err(e) = fzeta_cli::run(&cfg, &mut stdout.lock()) {
        eprintln!("fzeta: {e}");
        std::process::exit(e.exit_code());
    }
}
