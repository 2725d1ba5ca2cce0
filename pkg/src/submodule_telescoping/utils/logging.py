import sys

from colorama import Fore
from colorama import Style


def fancy_print(message: str) -> None:
    """
    Displays a fancy banner on standard error.

    Args:
        message (str): The message to display.
    """
    print(Style.BRIGHT + Fore.CYAN + f"\n{'=' * 50}", file=sys.stderr)
    print(Fore.MAGENTA + f"{message}", file=sys.stderr)
    print(Style.BRIGHT + Fore.CYAN + f"{'=' * 50}\n" + Style.RESET_ALL, file=sys.stderr)


def fancy_step_tracker(step: int, total_steps: int, name: str = "") -> None:
    """
    Displays a fancy step tracker for each stage of the telescoping pipeline.

    Args:
        step (int): The current step in the pipeline.
        total_steps (int): The total number of steps in the pipeline.
        name (str): The stage name.
    """
    suffix = f": {name.upper()}" if name else ""
    fancy_print(f"STAGE {step + 1}/{total_steps}{suffix}")


def log(message: str, verbose: int = 0, level: int = 1, color: str = Fore.GREEN) -> None:
    """
    Prints a coloured diagnostic line when the verbosity reaches `level`.

    Args:
        message (str): The line to print.
        verbose (int): The caller's verbosity.
        level (int): Minimum verbosity at which the line is shown.
        color (str): A colorama foreground colour.
    """
    if verbose >= level:
        print(color + message + Style.RESET_ALL, file=sys.stderr)
