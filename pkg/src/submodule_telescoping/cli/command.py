import argparse
from dataclasses import dataclass
from dataclasses import field
from typing import Callable


@dataclass(frozen=True)
class Argument:
    """
    An argparse argument declared next to the subcommand that reads it.

    Attributes:
        flags (tuple[str, ...]): Option strings, e.g. ("--max-order",).
        options (dict): Keyword arguments for `add_argument`.
    """

    flags: tuple
    options: dict = field(default_factory=dict)


def arg(*flags: str, **options) -> Argument:
    return Argument(flags, options)


def summary_line(fn: Callable) -> str:
    """The first line of the docstring, used as the subcommand help."""
    doc = (fn.__doc__ or "").strip()
    return doc.splitlines()[0] if doc else ""


class Command:
    """
    A subcommand of the command line.

    Attributes:
        name (str): The subcommand name (the function name).
        fn (Callable): Called with the validated RunConfig; returns an exit code.
        description (str): One-line help text.
        arguments (tuple[Argument, ...]): Arguments only this subcommand accepts.
    """

    def __init__(self, name: str, fn: Callable, description: str, arguments: tuple = ()):
        self.name = name
        self.fn = fn
        self.description = description
        self.arguments = arguments

    def __str__(self):
        return f"{self.name}: {self.description}"

    def register(self, subparsers, shared: tuple = ()) -> argparse.ArgumentParser:
        """
        Adds the subcommand parser with the shared arguments and its own.

        Args:
            subparsers: The object returned by `add_subparsers`.
            shared (tuple[Argument, ...]): Arguments every subcommand accepts.

        Returns:
            argparse.ArgumentParser: The new subcommand parser.
        """
        parser = subparsers.add_parser(self.name, help=self.description, description=self.description)
        for argument in (*shared, *self.arguments):
            parser.add_argument(*argument.flags, **argument.options)
        return parser

    def run(self, config) -> int:
        """
        Executes the subcommand.

        Returns:
            int: The exit code.
        """
        return self.fn(config)


def command(*arguments: Argument) -> Callable[[Callable], Command]:
    """
    A decorator that turns a function into a Command with extra arguments.

    Args:
        *arguments (Argument): Arguments specific to this subcommand.

    Returns:
        Callable: Wraps the function into a Command named after it.
    """

    def wrapper(fn: Callable) -> Command:
        return Command(name=fn.__name__, fn=fn, description=summary_line(fn), arguments=arguments)

    return wrapper
