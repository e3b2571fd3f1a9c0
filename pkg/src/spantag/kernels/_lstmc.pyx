# LSTM sequence kernels, compiled twin of fallback.py.
# Same gate layout [input | forget | cell | output], zero initial states.

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, tanh

cnp.import_array()


cdef inline double sigmoid(double x) noexcept:
    return 1.0 / (1.0 + exp(-x))


def lstm_seq_forward(double[:, ::1] pre, double[:, ::1] w_h):
    cdef Py_ssize_t n = pre.shape[0]
    cdef Py_ssize_t four_h = pre.shape[1]
    cdef Py_ssize_t h = four_h // 4

    h_out_arr = np.empty((n, h))
    c_arr = np.empty((n, h))
    gates_arr = np.empty((n, four_h))
    c_tanh_arr = np.empty((n, h))
    cdef double[:, ::1] h_out = h_out_arr
    cdef double[:, ::1] c = c_arr
    cdef double[:, ::1] gates = gates_arr
    cdef double[:, ::1] c_tanh = c_tanh_arr

    a_arr = np.empty(four_h)
    cdef double[::1] a = a_arr
    cdef Py_ssize_t t, j, k
    cdef double acc, i_g, f_g, g_g, o_g, c_t, tc, c_pr, h_pr

    for t in range(n):
        for j in range(four_h):
            acc = pre[t, j]
            if t > 0:
                for k in range(h):
                    acc += h_out[t - 1, k] * w_h[k, j]
            a[j] = acc
        for j in range(h):
            i_g = sigmoid(a[j])
            f_g = sigmoid(a[h + j])
            g_g = tanh(a[2 * h + j])
            o_g = sigmoid(a[3 * h + j])
            c_pr = c[t - 1, j] if t > 0 else 0.0
            c_t = f_g * c_pr + i_g * g_g
            tc = tanh(c_t)
            gates[t, j] = i_g
            gates[t, h + j] = f_g
            gates[t, 2 * h + j] = g_g
            gates[t, 3 * h + j] = o_g
            c[t, j] = c_t
            c_tanh[t, j] = tc
            h_out[t, j] = o_g * tc
    return h_out_arr, c_arr, gates_arr, c_tanh_arr


def lstm_seq_backward(double[:, ::1] dh_out, double[:, ::1] w_h,
                      double[:, ::1] h_out, double[:, ::1] c,
                      double[:, ::1] gates, double[:, ::1] c_tanh):
    cdef Py_ssize_t n = dh_out.shape[0]
    cdef Py_ssize_t h = dh_out.shape[1]
    cdef Py_ssize_t four_h = 4 * h

    dpre_arr = np.empty((n, four_h))
    dw_h_arr = np.zeros((h, four_h))
    cdef double[:, ::1] dpre = dpre_arr
    cdef double[:, ::1] dw_h = dw_h_arr

    dh_rec_arr = np.zeros(h)
    dc_rec_arr = np.zeros(h)
    cdef double[::1] dh_rec = dh_rec_arr
    cdef double[::1] dc_rec = dc_rec_arr

    cdef Py_ssize_t t, j, k
    cdef double i_g, f_g, g_g, o_g, tc, dh, dc, c_pr, acc

    for t in range(n - 1, -1, -1):
        for j in range(h):
            i_g = gates[t, j]
            f_g = gates[t, h + j]
            g_g = gates[t, 2 * h + j]
            o_g = gates[t, 3 * h + j]
            tc = c_tanh[t, j]
            dh = dh_out[t, j] + dh_rec[j]
            dc = dh * o_g * (1.0 - tc * tc) + dc_rec[j]
            c_pr = c[t - 1, j] if t > 0 else 0.0
            dpre[t, j] = dc * g_g * i_g * (1.0 - i_g)
            dpre[t, h + j] = dc * c_pr * f_g * (1.0 - f_g)
            dpre[t, 2 * h + j] = dc * i_g * (1.0 - g_g * g_g)
            dpre[t, 3 * h + j] = dh * tc * o_g * (1.0 - o_g)
            dc_rec[j] = dc * f_g
        if t > 0:
            for k in range(h):
                for j in range(four_h):
                    dw_h[k, j] += h_out[t - 1, k] * dpre[t, j]
        for k in range(h):
            acc = 0.0
            for j in range(four_h):
                acc += w_h[k, j] * dpre[t, j]
            dh_rec[k] = acc
    return dpre_arr, dw_h_arr
