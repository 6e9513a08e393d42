"""Random walk in random environment on a b-ary tree."""

try:
    from . import _rwre as _ext
except ImportError:  # in-tree build: the module sits next to the package
    import _rwre as _ext

__all__ = [name for name in dir(_ext) if not name.startswith("_")]
globals().update({name: getattr(_ext, name) for name in __all__})
