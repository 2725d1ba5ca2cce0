from collections import deque
from contextvars import ContextVar
from time import perf_counter
from typing import Callable

from colorama import Fore

from submodule_telescoping.utils.errors import StageError
from submodule_telescoping.utils.errors import TelescopingError
from submodule_telescoping.utils.logging import fancy_step_tracker
from submodule_telescoping.utils.logging import log

ACTIVE_PIPELINE: ContextVar = ContextVar("active_pipeline", default=None)


class Stage:
    """
    One step of the telescoping pipeline.

    A stage reads the values produced by earlier stages from a shared state dict and
    returns a dict of new values that is merged into it.

    Attributes:
        name (str): The stage label, used in logs, timings and errors.
        fn (Callable): Called with the state dict; returns a dict of new entries.
        dependencies (list[Stage]): Stages that must run before this one.
        dependents (list[Stage]): Stages that wait for this one.
    """

    def __init__(self, name: str, fn: Callable[[dict], dict]):
        self.name = name
        self.fn = fn
        self.dependencies: list[Stage] = []
        self.dependents: list[Stage] = []
        Pipeline.register_stage(self)

    def __repr__(self):
        return f"{self.name}"

    def __rshift__(self, other):
        """
        Defines the '>>' operator: `a >> b` makes b depend on a.

        Args:
            other (Stage | list[Stage]): The stage(s) that depend on this stage.

        Returns:
            The right operand, to allow chaining.
        """
        self.add_dependent(other)
        return other

    def __rrshift__(self, other):
        """
        Defines `[a, b] >> c`: c depends on every stage of the list.

        Args:
            other (list[Stage]): The stages this stage depends on.
        """
        for item in other:
            item.add_dependent(self)
        return self

    def add_dependent(self, other):
        """
        Adds a dependent to this stage.

        Raises:
            TypeError: If the dependent is not a Stage or a list of Stages.
        """
        if isinstance(other, Stage):
            other.dependencies.append(self)
            self.dependents.append(other)
        elif isinstance(other, list) and all(isinstance(item, Stage) for item in other):
            for item in other:
                item.dependencies.append(self)
                self.dependents.append(item)
        else:
            raise TypeError("The dependent must be an instance or list of Stage.")

    def run(self, state: dict) -> dict:
        return self.fn(state) or {}


class Pipeline:
    """
    A DAG of stages run in topological order over one shared state dict.

    Attributes:
        stages (list[Stage]): The registered stages.
        timings (dict[str, float]): Wall time per stage in seconds, after `run`.
        verbose (int): Verbosity of the stage banners.
    """

    def __init__(self, verbose: int = 0):
        self.stages: list[Stage] = []
        self.timings: dict[str, float] = {}
        self.verbose = verbose

    def __enter__(self):
        self._token = ACTIVE_PIPELINE.set(self)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        ACTIVE_PIPELINE.reset(self._token)

    def add_stage(self, stage: Stage):
        self.stages.append(stage)

    @staticmethod
    def register_stage(stage: Stage):
        """Registers a stage with the pipeline whose context is active in this thread, if any."""
        pipeline = ACTIVE_PIPELINE.get()
        if pipeline is not None:
            pipeline.add_stage(stage)

    def topological_sort(self) -> list[Stage]:
        """
        Orders the stages so that every stage follows its dependencies; ties keep the
        registration order.

        Raises:
            ValueError: If there's a circular dependency among the stages.
        """
        in_degree = {stage: len(stage.dependencies) for stage in self.stages}
        queue = deque([stage for stage in self.stages if in_degree[stage] == 0])

        sorted_stages = []

        while queue:
            current = queue.popleft()
            sorted_stages.append(current)

            for dependent in current.dependents:
                in_degree[dependent] -= 1
                if in_degree[dependent] == 0:
                    queue.append(dependent)

        if len(sorted_stages) != len(self.stages):
            raise ValueError("Circular dependencies detected among stages, preventing a valid topological sort")

        return sorted_stages

    def run(self, state: dict | None = None) -> dict:
        """
        Runs every stage in topological order.

        Args:
            state (dict | None): Initial entries of the shared state.

        Returns:
            dict: The final state.

        Raises:
            StageError: Wrapping the first TelescopingError with the failing stage's name.
        """
        state = dict(state or {})
        ordered = self.topological_sort()
        for step, stage in enumerate(ordered):
            if self.verbose:
                fancy_step_tracker(step, len(ordered), stage.name)
            start = perf_counter()
            try:
                state.update(stage.run(state))
            except StageError:
                raise
            except TelescopingError as err:
                raise StageError(stage.name, err) from err
            finally:
                self.timings[stage.name] = perf_counter() - start
            log(f"{stage.name}: {self.timings[stage.name]:.3f}s", self.verbose, color=Fore.YELLOW)
        return state
