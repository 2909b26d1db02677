# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled chunk kernels: codebook lookup + reduce-merge + shuffle-merge,
and per-chunk treeless decoding. Both release the GIL so chunk ranges can
run on a thread pool."""
from libc.stdint cimport uint8_t, uint16_t, uint32_t, uint64_t, int64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset, memcpy

NAME = "native"


cdef inline uint64_t _mask(int w) noexcept nogil:
    return (<uint64_t>1 << w) - 1


cdef void _encode_one(const uint16_t* sym, const uint32_t* code_bits,
                      const uint8_t* code_len, int M, int r, int W,
                      uint64_t* ubits, int64_t* ulen, uint8_t* brk,
                      uint64_t* words, uint64_t* scratch,
                      uint32_t* out_words, uint32_t* out_bitlen, uint8_t* out_brk) noexcept nogil:
    cdef Py_ssize_t N = <Py_ssize_t>1 << M
    cdef Py_ssize_t S = <Py_ssize_t>1 << (M - r)
    cdef Py_ssize_t i, k, m, half, g, start, need, j, dest, limit
    cdef int64_t ln, lL, lR
    cdef uint64_t wmask = _mask(W), w, eb
    cdef uint16_t s

    for i in range(N):
        s = sym[i]
        ubits[i] = code_bits[s]
        ulen[i] = code_len[s]
        brk[i] = 0

    m = N
    for i in range(r):
        m >>= 1
        for k in range(m):
            ln = ulen[2 * k] + ulen[2 * k + 1]
            if brk[2 * k] or brk[2 * k + 1] or ln > W:
                brk[k] = 1
                ubits[k] = 0
                ulen[k] = 0
            else:
                brk[k] = 0
                ubits[k] = (ubits[2 * k] << ulen[2 * k + 1]) | ubits[2 * k + 1]
                ulen[k] = ln

    for k in range(S):
        if ulen[k] > 0:
            words[k] = (ubits[k] << (W - ulen[k])) & wmask
        else:
            words[k] = 0

    half = 1
    while half < S:
        g = 0
        while g < S // (2 * half):
            start = g * 2 * half
            limit = start + 2 * half
            lL = ulen[2 * g]
            lR = ulen[2 * g + 1]
            need = (lR + W - 1) // W
            memcpy(scratch, words + start + half, need * sizeof(uint64_t))
            memset(words + start + half, 0, need * sizeof(uint64_t))
            eb = <uint64_t>(lL % W)
            for j in range(need):
                w = scratch[j]
                dest = start + lL // W + j
                words[dest] |= w >> eb
                if eb > 0 and dest + 1 < limit:
                    words[dest + 1] |= (w << (W - eb)) & wmask
            ulen[g] = lL + lR
            g += 1
        half *= 2

    for k in range(S):
        out_words[k] = <uint32_t>words[k]
    out_bitlen[0] = <uint32_t>ulen[0]
    memcpy(out_brk, brk, S * sizeof(uint8_t))


def encode_chunks(const uint16_t[::1] symbols, const uint32_t[::1] code_bits,
                  const uint8_t[::1] code_len, int M, int r, int W,
                  uint32_t[:, ::1] out_words, uint32_t[::1] out_bitlen,
                  uint8_t[:, ::1] out_brk, Py_ssize_t c0, Py_ssize_t c1):
    """Encode chunks ``[c0, c1)`` of ``symbols`` into the output arrays."""
    cdef Py_ssize_t N = <Py_ssize_t>1 << M
    cdef Py_ssize_t S = <Py_ssize_t>1 << (M - r)
    cdef Py_ssize_t c
    cdef uint64_t* ubits
    cdef int64_t* ulen
    cdef uint8_t* brk
    cdef uint64_t* words
    cdef uint64_t* scratch
    if c1 <= c0:
        return
    with nogil:
        ubits = <uint64_t*>malloc(N * sizeof(uint64_t))
        ulen = <int64_t*>malloc(N * sizeof(int64_t))
        brk = <uint8_t*>malloc(N * sizeof(uint8_t))
        words = <uint64_t*>malloc(S * sizeof(uint64_t))
        scratch = <uint64_t*>malloc(S * sizeof(uint64_t))
        if ubits != NULL and ulen != NULL and brk != NULL and words != NULL and scratch != NULL:
            for c in range(c0, c1):
                _encode_one(&symbols[c * N], &code_bits[0], &code_len[0], M, r, W,
                            ubits, ulen, brk, words, scratch,
                            &out_words[c, 0], &out_bitlen[c], &out_brk[c, 0])
        free(ubits)
        free(ulen)
        free(brk)
        free(words)
        free(scratch)
    if ubits == NULL or ulen == NULL or brk == NULL or words == NULL or scratch == NULL:
        raise MemoryError()


cdef inline uint64_t _peek(const uint32_t* words, Py_ssize_t nwords, int64_t pos,
                           int nbits, int W) noexcept nogil:
    cdef Py_ssize_t widx = pos // W
    cdef int off = pos % W
    cdef uint64_t acc = 0
    cdef int have = 0
    cdef Py_ssize_t j = widx
    while have < off + nbits:
        acc = acc << W
        if j < nwords:
            acc |= words[j]
        have += W
        j += 1
    return (acc >> (have - off - nbits)) & _mask(nbits)


def decode_chunks(const uint32_t[::1] payload, const int64_t[::1] word_offsets,
                  const uint32_t[::1] bit_lens, const int64_t[::1] counts,
                  const int64_t[::1] first, const int64_t[::1] count,
                  const int64_t[::1] entry, const uint16_t[::1] symbols_by_rank,
                  int H, int W, uint16_t[::1] out, int64_t[::1] consumed,
                  Py_ssize_t c0, Py_ssize_t c1, int64_t out_start):
    """Decode chunks ``[c0, c1)`` into ``out`` starting at ``out_start``.

    Bits used per chunk go to ``consumed``. Returns ``(-1, 0)`` on success or
    ``(chunk, bit_offset)`` of the first codeword that fails to decode.
    """
    cdef Py_ssize_t c, i, nwords
    cdef int j
    cdef int64_t pos, nbits, k = out_start, prefix = 0
    cdef int ln = 0
    cdef uint64_t window
    cdef int64_t err_chunk = -1, err_pos = 0
    cdef const uint32_t* words
    with nogil:
        for c in range(c0, c1):
            words = &payload[word_offsets[c]] if word_offsets[c + 1] > word_offsets[c] else NULL
            nwords = word_offsets[c + 1] - word_offsets[c]
            nbits = bit_lens[c]
            pos = 0
            for i in range(counts[c]):
                if nwords > 0:
                    window = _peek(words, nwords, pos, H, W)
                else:
                    window = 0
                ln = 0
                for j in range(1, H + 1):
                    if count[j] == 0:
                        continue
                    prefix = <int64_t>(window >> (H - j))
                    if prefix >= first[j] - count[j] + 1:
                        ln = j
                        break
                if ln == 0 or prefix > first[ln] or pos + ln > nbits:
                    err_chunk = c
                    err_pos = pos
                    break
                out[k] = symbols_by_rank[entry[ln] + first[ln] - prefix]
                k += 1
                pos += ln
            consumed[c] = pos
            if err_chunk >= 0:
                break
    return err_chunk, err_pos
