public a
a |-R ?x
a, b |-R ?y
