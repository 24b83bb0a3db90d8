"""
Entrypoint for running fedloc as a module with `python -m fedloc`.
"""

if __name__ == "__main__":
    from .cli.main import main_entry

    main_entry()
