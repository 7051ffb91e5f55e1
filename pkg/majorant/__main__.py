"""Entry point for running majorant as a module: python -m majorant"""

from dotenv import load_dotenv

# Load .env file if present (before importing anything else)
load_dotenv()

from majorant.cli.commands import cli  # noqa: E402

if __name__ == "__main__":
    cli()
