__version__ = '0.1.0'


def main():
    """Entry point for the application script"""
    from gwb.cli import main as cli_main
    cli_main()
