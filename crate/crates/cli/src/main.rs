use horospherical_cli::CliError;

fn main() {
    match horospherical_cli::run(std::env::args_os()) {
        Ok(()) | Err(CliError::Closed) => {}
        Err(e) => {
            eprintln!("horospherical: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
