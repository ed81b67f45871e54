# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled text kernels: the per-character inner loops of the pipeline.

Semantics are defined by `c5corpus.chartables`; `c5corpus._speedups_py`
is the pure-Python reference these must match exactly.
"""

from cpython.mem cimport PyMem_Free, PyMem_Malloc
from libc.string cimport memset

cdef extern from "Python.h":
    int PyUnicode_KIND(object o)
    void* PyUnicode_DATA(object o)
    Py_ssize_t PyUnicode_GET_LENGTH(object o)
    Py_UCS4 PyUnicode_READ(int kind, void *data, Py_ssize_t index)
    object PyUnicode_FromKindAndData(int kind, const void *buffer, Py_ssize_t size)
    object PyUnicode_Substring(object o, Py_ssize_t start, Py_ssize_t end)
    int PyUnicode_4BYTE_KIND

BACKEND = "native"

# All blank code points fit in the BMP; one byte per BMP code point.
cdef unsigned char _BLANK_TBL[0x10000]

cdef inline bint _is_blank(Py_UCS4 ch) nogil:
    return ch < 0x10000 and _BLANK_TBL[ch]

cdef inline bint _is_cjk(Py_UCS4 ch) nogil:
    return 0x4E00 <= ch <= 0x9FFF

# 。 ！ ？ ； …
cdef inline bint _is_mark(Py_UCS4 ch) nogil:
    return (ch == 0x3002 or ch == 0xFF01 or ch == 0xFF1F
            or ch == 0xFF1B or ch == 0x2026)

# ” ’
cdef inline bint _is_quote(Py_UCS4 ch) nogil:
    return ch == 0x201D or ch == 0x2019


def collapse_blanks(str s):
    """Replace each run of blank characters with one space; trim the ends."""
    cdef Py_ssize_t n = PyUnicode_GET_LENGTH(s)
    if n == 0:
        return s
    cdef int kind = PyUnicode_KIND(s)
    cdef void* data = PyUnicode_DATA(s)
    cdef Py_UCS4* buf = <Py_UCS4*> PyMem_Malloc(n * sizeof(Py_UCS4))
    if buf is NULL:
        raise MemoryError()
    cdef Py_ssize_t i, out = 0
    cdef bint pending = False, started = False
    cdef Py_UCS4 ch
    try:
        for i in range(n):
            ch = PyUnicode_READ(kind, data, i)
            if _is_blank(ch):
                if started:
                    pending = True
            else:
                if pending:
                    buf[out] = 0x20
                    out += 1
                    pending = False
                buf[out] = ch
                out += 1
                started = True
        return PyUnicode_FromKindAndData(PyUnicode_4BYTE_KIND, buf, out)
    finally:
        PyMem_Free(buf)


def strip_blanks(str s):
    """Remove every blank character."""
    cdef Py_ssize_t n = PyUnicode_GET_LENGTH(s)
    if n == 0:
        return s
    cdef int kind = PyUnicode_KIND(s)
    cdef void* data = PyUnicode_DATA(s)
    cdef Py_UCS4* buf = <Py_UCS4*> PyMem_Malloc(n * sizeof(Py_UCS4))
    if buf is NULL:
        raise MemoryError()
    cdef Py_ssize_t i, out = 0
    cdef Py_UCS4 ch
    try:
        for i in range(n):
            ch = PyUnicode_READ(kind, data, i)
            if not _is_blank(ch):
                buf[out] = ch
                out += 1
        return PyUnicode_FromKindAndData(PyUnicode_4BYTE_KIND, buf, out)
    finally:
        PyMem_Free(buf)


def han_counts(str s):
    """Return (CJK ideograph count, non-blank count) for a string."""
    cdef Py_ssize_t n = PyUnicode_GET_LENGTH(s)
    cdef int kind = PyUnicode_KIND(s)
    cdef void* data = PyUnicode_DATA(s)
    cdef Py_ssize_t i
    cdef Py_ssize_t han = 0, nonblank = 0
    cdef Py_UCS4 ch
    for i in range(n):
        ch = PyUnicode_READ(kind, data, i)
        if _is_blank(ch):
            continue
        nonblank += 1
        if _is_cjk(ch):
            han += 1
    return han, nonblank


def split_after_marks(str s):
    """Cut after each sentence-final mark, attaching one closing quote."""
    cdef Py_ssize_t n = PyUnicode_GET_LENGTH(s)
    cdef int kind = PyUnicode_KIND(s)
    cdef void* data = PyUnicode_DATA(s)
    cdef list out = []
    cdef Py_ssize_t start = 0, i = 0, end
    cdef Py_UCS4 ch
    while i < n:
        ch = PyUnicode_READ(kind, data, i)
        if _is_mark(ch):
            end = i + 1
            if end < n and _is_quote(PyUnicode_READ(kind, data, end)):
                end += 1
            out.append(PyUnicode_Substring(s, start, end))
            start = end
            i = end
        else:
            i += 1
    if start < n:
        out.append(PyUnicode_Substring(s, start, n))
    return out


def _init_tables():
    from c5corpus.chartables import BLANK_CODEPOINTS
    memset(_BLANK_TBL, 0, sizeof(_BLANK_TBL))
    for cp in BLANK_CODEPOINTS:
        if cp < 0x10000:
            _BLANK_TBL[cp] = 1

_init_tables()
