import hashlib
import json
import logging
from typing import Any

log = logging.getLogger(__name__)


def canonical_json(obj: Any) -> str:
    """
    Serializes a JSON-compatible object canonically: sorted keys, two-space
    indentation and a trailing newline. Parsing and re-serializing a canonical
    document yields the same bytes.
    """
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + '\n'


def _sig_part(value) -> str:
    if isinstance(value, str):
        return value
    try:
        return json.dumps(value, sort_keys=True, separators=(',', ':'))
    except TypeError:
        # Non-JSON values fall back to str, which is stable for the value
        # types used here (tuples of ints, order tags).
        return str(value)


def object_sig(obj, *args, **kwargs) -> str:
    """
    Generates a string that identifies a computation by the kind of object
    it concerns and the arguments that determine it. `obj` is either a string
    naming the kind or an instance whose class name is used.

    The format of the output is easiest discovered by a test call.
    """
    kind = obj if isinstance(obj, str) else obj.__class__.__name__
    args_str = ';;'.join(map(_sig_part, args)) or "<no_args>"
    kwargs_str = ';;'.join(['%s=%s' % (str(k), _sig_part(v))
                            for k, v in sorted(kwargs.items())]) or "<no_kwargs>"
    return ';;;'.join((kind, args_str, kwargs_str))


def object_id(obj, *args, **kwargs) -> str:
    """
    Hashes the signature of a computation into an identifier usable as a cache
    key or as the digest of a report's inputs.

    Arguments:
    obj -- the kind of object (string or instance).
    *args -- positional values determining the computation.
    **kwargs -- named values determining the computation.

    Returns:
    The hex sha256 digest of object_sig(obj, *args, **kwargs).
    """
    sig = object_sig(obj, *args, **kwargs)
    return hashlib.sha256(sig.encode('utf-8')).hexdigest()


def digest_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()
