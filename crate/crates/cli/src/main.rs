use clap::Parser;

fn main() {
    let cli = tsgray_cli::Cli::parse();
    let code = tsgray_cli::run(
        cli,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
