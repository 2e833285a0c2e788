import logging
from abc import ABC
from typing import Optional

from gwb.picklers import MemoryPickler, ObjectNotFoundError, Pickler

log = logging.getLogger(__name__)


class PersistentStateMachine(ABC):
    """
    Runs a pipeline of states. Each state is a method returning a tuple
    (next_state, data); a next_state of None ends the run. After every
    non-final state the pair is checkpointed through the pickler under the
    machine's id, so a new machine with the same id resumes where the last one
    stopped.
    """

    def __init__(self, id: str, start_state: str,
                 pickler: Optional[Pickler] = None, force_restart=False):
        self.id = id
        self.start_state = start_state
        self.pickler = pickler if pickler is not None else MemoryPickler()
        self.next_state = None
        self.data = {}

        if force_restart:
            self.pickler.delete(id)
        else:
            try:
                self.next_state, self.data = self.pickler.load(id)
                log.debug(f"Resuming {id[:12]} at state '{self.next_state}'.")
            except ObjectNotFoundError:
                pass

    def get_state_func(self, func_name):
        """
        Retrieves a function in this class with the given name.

        Keyword arguments:
        func_name -- The name of the function to retrieve.

        Returns:
        The function.
        """
        func = getattr(self, func_name, None)
        if func is None:
            raise RuntimeError(
                f"Couldn't retrieve a function with the name {func_name}.")
        if not callable(func):
            raise RuntimeError(
                f"Found an attribute with the name {func_name} but it is not callable.")
        return func

    def run_next(self) -> bool:
        state = self.next_state or self.start_state

        try:
            func = self.get_state_func(state)
        except Exception as e:
            raise RuntimeError(
                f"Failed to retrieve the function for running the next "
                f"step '{state}' of the machine with id {self.id}.") from e

        log.debug(f'Running state {state}')
        ret = func()

        if not isinstance(ret, (list, tuple)) or len(ret) != 2:
            raise RuntimeError(
                f"Failed while executing the state '{state}'. The function "
                f"should return a tuple of 2 elements, the next state and the "
                f"updated state data.")

        self.next_state, self.data = ret

        if self.next_state is None:
            log.debug(f"'{state}' is the last state.")
            self.pickler.delete(self.id)
            return False
        log.debug(f"'{state}' done; '{self.next_state}' is next.")
        self.pickler.dump(self.id, (self.next_state, self.data))
        return True

    def run(self) -> dict:
        while self.run_next():
            pass
        return self.data
