# ?x is sent to an agent that answers with enc(s, ?x)
public a
a, enc(k, b) |-R ?x
a, enc(k, b), enc(s, ?x) |- s
