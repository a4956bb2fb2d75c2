public a
a |-R enc(b, ?x)
