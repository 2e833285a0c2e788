from abc import ABC, abstractmethod
from collections import OrderedDict
import logging
import os
import pickle
import tempfile
import threading
from typing import Optional


log = logging.getLogger(__name__)


class ObjectNotFoundError(RuntimeError):
    """
    This exception is thrown by the `load` methods of picklers to indicate that
    nothing is stored under the requested id. Callers then fall back to
    computing the object.
    """
    pass


class Pickler(ABC):
    """
    Storage for computed objects (Groebner bases, pipeline checkpoints) keyed
    by the ids produced by `serialization.object_id`.
    """

    @abstractmethod
    def dump(self, obj_id: str, obj):
        pass

    @abstractmethod
    def load(self, obj_id: str):
        pass

    @abstractmethod
    def delete(self, obj_id: str):
        pass


class MemoryPickler(Pickler):
    """
    Keeps pickled objects in a dict. With a `capacity`, the least recently
    used object is evicted once more than `capacity` objects are stored.
    """

    def __init__(self, capacity: Optional[int] = None):
        if capacity is not None and capacity < 1:
            raise ValueError(f"capacity must be positive, got {capacity}.")
        self.capacity = capacity
        self.storage = OrderedDict()
        self._lock = threading.Lock()

    def __len__(self):
        with self._lock:
            return len(self.storage)

    def dump(self, obj_id: str, obj):
        obj_bytes = pickle.dumps(obj, protocol=pickle.HIGHEST_PROTOCOL)
        with self._lock:
            self.storage[obj_id] = obj_bytes
            self.storage.move_to_end(obj_id)
            while self.capacity is not None and len(self.storage) > self.capacity:
                evicted, _ = self.storage.popitem(last=False)
                log.debug(f"Evicted object with id {evicted} from memory.")
        log.debug(f"Saved object with id {obj_id} to memory.")

    def load(self, obj_id: str):
        with self._lock:
            obj_bytes = self.storage.get(obj_id)
            if obj_bytes is not None:
                self.storage.move_to_end(obj_id)
        if obj_bytes is None:
            raise ObjectNotFoundError(
                f"Couldn't find object with id {obj_id} in memory.")
        try:
            obj = pickle.loads(obj_bytes)
        except Exception as e:
            log.exception(e)
            raise ObjectNotFoundError() from e
        log.debug(f"Loaded object with id {obj_id} from memory.")
        return obj

    def delete(self, obj_id: str):
        with self._lock:
            if self.storage.pop(obj_id, None) is not None:
                log.debug(f"Deleted object with id {obj_id} from memory.")

    def clear(self):
        with self._lock:
            self.storage.clear()


class FilePickler(Pickler):
    """
    Stores objects as `<id>.state` files under `path`, which is created on
    first use. Writes go through a temporary file so concurrent readers never
    see a partial object.
    """

    def __init__(self, path=None):
        self.path = path or os.path.join(tempfile.gettempdir(), 'gwb-cache')

    def _filepath(self, key):
        return os.path.join(self.path, f'{key}.state')

    def dump(self, obj_id: str, obj):
        os.makedirs(self.path, exist_ok=True)
        filepath = self._filepath(obj_id)
        fd, tmp_path = tempfile.mkstemp(dir=self.path, suffix='.tmp')
        with os.fdopen(fd, 'wb') as file:
            pickle.dump(obj, file, protocol=pickle.HIGHEST_PROTOCOL)
        os.replace(tmp_path, filepath)
        log.debug(f"Saved object with id {obj_id} to {filepath}.")

    def load(self, obj_id: str):
        filepath = self._filepath(obj_id)

        if not os.path.isfile(filepath):
            raise ObjectNotFoundError(
                f"Couldn't find the file {filepath} while trying to load "
                f"object with ID {obj_id}.")

        try:
            with open(filepath, 'rb') as file:
                obj = pickle.load(file)
        except Exception as e:
            log.exception(e)
            raise ObjectNotFoundError() from e
        log.debug(f"Loaded object with id {obj_id} from {filepath}.")
        return obj

    def delete(self, obj_id: str):
        filepath = self._filepath(obj_id)
        if os.path.exists(filepath):
            os.remove(filepath)
            log.debug(
                f"Deleted object with id {obj_id}; removed the file {filepath}.")
