"""bunsetsukit: entry point for the bunsetsu identification toolkit."""

from bunsetsukit.cli import main

if __name__ == "__main__":
    main()
