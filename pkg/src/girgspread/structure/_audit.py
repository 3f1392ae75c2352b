"""Observers notified of every path and hierarchy the finders return."""
_observers = []


def subscribe(fn):
    _observers.append(fn)
    return fn


def unsubscribe(fn):
    if fn in _observers:
        _observers.remove(fn)


def emit(graph, result):
    for fn in list(_observers):
        fn(graph, result)
    return result
