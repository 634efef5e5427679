import sys

from dotenv import load_dotenv

from cli.commands import main as run_cli

load_dotenv()


def main() -> int:
    return run_cli()


if __name__ == "__main__":
    sys.exit(main())
