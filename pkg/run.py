#!/usr/bin/env python3
"""
Quick start script for the fractal entropy lab
"""
import sys
from pathlib import Path


def check_requirements():
    """Checks that requirements are installed"""
    try:
        import numpy
        import pydantic
        import dotenv
        print("✅ All dependencies are installed", file=sys.stderr)
        return True
    except ImportError as e:
        print(f"❌ Missing dependencies: {e}", file=sys.stderr)
        print("💡 Run: pip install -r requirements.txt", file=sys.stderr)
        return False


def check_env_file():
    """Reports whether a .env file overrides the defaults"""
    if Path(".env").exists():
        print("✅ .env file found", file=sys.stderr)
    else:
        print("💡 No .env file; using default budgets and constants", file=sys.stderr)


def main():
    """Main function"""
    if not check_requirements():
        return 1
    check_env_file()

    from src.main import main as cli_main

    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
