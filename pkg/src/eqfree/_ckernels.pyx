# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled word kernels; see ``eqfree._pykernels`` for the reference semantics."""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy


cdef inline int _push(int* stack, int n, const int* img, int m) noexcept nogil:
    cdef int i, d
    for i in range(m):
        d = img[i]
        if n > 0 and stack[n - 1] == -d:
            n -= 1
        else:
            stack[n] = d
            n += 1
    return n


cdef inline int _push_inverse(int* stack, int n, const int* img, int m) noexcept nogil:
    cdef int i, d
    for i in range(m - 1, -1, -1):
        d = -img[i]
        if n > 0 and stack[n - 1] == -d:
            n -= 1
        else:
            stack[n] = d
            n += 1
    return n


def reduce_codes(seq):
    cdef list out = []
    cdef int c
    cdef Py_ssize_t n = 0
    for c in seq:
        if n > 0 and <int>out[n - 1] == -c:
            out.pop()
            n -= 1
        else:
            out.append(c)
            n += 1
    return tuple(out)


def invert_codes(word):
    return tuple([-c for c in reversed(word)])


def apply_codes(images, word):
    cdef list out = []
    cdef Py_ssize_t n = 0
    cdef int c, d
    cdef tuple img
    for c in word:
        if c > 0:
            img = tuple(images[c - 1])
            for d in img:
                if n > 0 and <int>out[n - 1] == -d:
                    out.pop()
                    n -= 1
                else:
                    out.append(d)
                    n += 1
        else:
            img = tuple(images[-c - 1])
            for d in reversed(img):
                d = -d
                if n > 0 and <int>out[n - 1] == -d:
                    out.pop()
                    n -= 1
                else:
                    out.append(d)
                    n += 1
    return tuple(out)


def letter_order(int ngens):
    cdef list codes = []
    cdef int i
    for i in range(1, ngens + 1):
        codes.append(i)
        codes.append(-i)
    return codes


cdef int* _flatten(images, int ngens, int* offsets, int* maxlen) except NULL:
    """Pack generator images into one array; offsets has ngens + 1 entries."""
    cdef int total = 0, i, j
    cdef int* data
    maxlen[0] = 0
    offsets[0] = 0
    for i in range(ngens):
        total += len(images[i])
        offsets[i + 1] = total
        if len(images[i]) > maxlen[0]:
            maxlen[0] = len(images[i])
    data = <int*>malloc((total + 1) * sizeof(int))
    if data == NULL:
        raise MemoryError()
    for i in range(ngens):
        img = images[i]
        for j in range(len(img)):
            data[offsets[i] + j] = img[j]
    return data


def half_keys(g_images, h_images, int ngens, int length, middle, bint suffix):
    cdef dict table = {}
    cdef int nconst = len(middle)
    cdef int i, j, depth, c, last, gmax = 0, hmax = 0, cap, kl
    cdef int* goff = <int*>malloc((ngens + 1) * sizeof(int))
    cdef int* hoff = <int*>malloc((ngens + 1) * sizeof(int))
    cdef int* gdata = NULL
    cdef int* hdata = NULL
    cdef int* cdata = NULL
    cdef int* gst = NULL
    cdef int* hst = NULL
    cdef int* glen = NULL
    cdef int* hlen = NULL
    cdef int* word = NULL
    cdef int* choice = NULL
    cdef int* order = NULL
    cdef int* keybuf = NULL
    cdef int gi
    cdef list bucket
    try:
        if goff == NULL or hoff == NULL:
            raise MemoryError()
        gdata = _flatten(g_images, ngens, goff, &gmax)
        hdata = _flatten(h_images, ngens, hoff, &hmax)
        cdata = <int*>malloc((nconst + 1) * sizeof(int))
        for i in range(nconst):
            cdata[i] = middle[i]
        if length == 0:
            return {tuple([middle[i] for i in range(nconst)]): [()]}

        cap = length * (gmax if gmax > hmax else hmax) + 1
        gst = <int*>malloc((length + 1) * cap * sizeof(int))
        hst = <int*>malloc((length + 1) * cap * sizeof(int))
        glen = <int*>malloc((length + 1) * sizeof(int))
        hlen = <int*>malloc((length + 1) * sizeof(int))
        word = <int*>malloc((length + 1) * sizeof(int))
        choice = <int*>malloc((length + 1) * sizeof(int))
        order = <int*>malloc((2 * ngens + 1) * sizeof(int))
        keybuf = <int*>malloc((2 * cap + nconst + 1) * sizeof(int))
        if (gst == NULL or hst == NULL or glen == NULL or hlen == NULL or word == NULL
                or choice == NULL or order == NULL or keybuf == NULL or cdata == NULL):
            raise MemoryError()
        for i in range(ngens):
            order[2 * i] = i + 1
            order[2 * i + 1] = -(i + 1)

        glen[0] = 0
        hlen[0] = 0
        depth = 0
        choice[0] = -1
        while depth >= 0:
            choice[depth] += 1
            if choice[depth] >= 2 * ngens:
                depth -= 1
                continue
            c = order[choice[depth]]
            last = word[depth - 1] if depth > 0 else 0
            if c == -last:
                continue
            word[depth] = c
            gi = (c if c > 0 else -c) - 1
            # images of prefix of length depth + 1
            memcpy(gst + (depth + 1) * cap, gst + depth * cap, glen[depth] * sizeof(int))
            memcpy(hst + (depth + 1) * cap, hst + depth * cap, hlen[depth] * sizeof(int))
            if c > 0:
                glen[depth + 1] = _push(gst + (depth + 1) * cap, glen[depth],
                                        gdata + goff[gi], goff[gi + 1] - goff[gi])
                hlen[depth + 1] = _push(hst + (depth + 1) * cap, hlen[depth],
                                        hdata + hoff[gi], hoff[gi + 1] - hoff[gi])
            else:
                glen[depth + 1] = _push_inverse(gst + (depth + 1) * cap, glen[depth],
                                                gdata + goff[gi], goff[gi + 1] - goff[gi])
                hlen[depth + 1] = _push_inverse(hst + (depth + 1) * cap, hlen[depth],
                                                hdata + hoff[gi], hoff[gi + 1] - hoff[gi])
            if depth + 1 < length:
                depth += 1
                choice[depth] = -1
                continue
            # leaf: compute key
            if suffix:
                kl = 0
                kl = _push(keybuf, kl, hst + length * cap, hlen[length])
                kl = _push(keybuf, kl, cdata, nconst)
                kl = _push_inverse(keybuf, kl, gst + length * cap, glen[length])
            else:
                kl = 0
                kl = _push_inverse(keybuf, kl, hst + length * cap, hlen[length])
                kl = _push(keybuf, kl, cdata, nconst)
                kl = _push(keybuf, kl, gst + length * cap, glen[length])
            key = tuple([keybuf[j] for j in range(kl)])
            w = tuple([word[j] for j in range(length)])
            bucket = table.get(key)
            if bucket is None:
                table[key] = [w]
            else:
                bucket.append(w)
        return table
    finally:
        free(goff)
        free(hoff)
        free(gdata)
        free(hdata)
        free(cdata)
        free(gst)
        free(hst)
        free(glen)
        free(hlen)
        free(word)
        free(choice)
        free(order)
        free(keybuf)
