public a
a, enc(b, k), k |- b
