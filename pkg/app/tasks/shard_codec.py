from typing import Any

import msgpack


def custom_encode(obj):
    """Custom Msgpack encoder for integers wider than 64 bits and tuples"""
    if isinstance(obj, int):
        return {"__int__": format(obj, "x")}
    if isinstance(obj, tuple):
        return {"__tuple__": list(obj)}
    return obj

def custom_decode(obj):
    """Custom Msgpack decoder restoring wide integers and tuples"""
    if "__int__" in obj:
        return int(obj["__int__"], 16)
    if "__tuple__" in obj:
        return tuple(obj["__tuple__"])
    return obj

custom_msgpack = {
    "dumps": lambda obj: msgpack.packb(obj, default=custom_encode, use_bin_type=True, strict_types=True),
    "loads": lambda obj: msgpack.unpackb(obj, object_hook=custom_decode, raw=False),
}


def dumps(obj: Any) -> bytes:
    return custom_msgpack["dumps"](obj)


def loads(data: bytes) -> Any:
    return custom_msgpack["loads"](data)
