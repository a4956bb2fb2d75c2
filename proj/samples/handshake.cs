# the intruder first emits enc(?x, k), then must open a message built on ?x
public a
a, k |- enc(?x, k)
a, k, enc(pair(?x, s), k) |- s
