"""
Gross points and the class group action
=======================================

A Gross point of conductor n is an optimal embedding of O_n = Z + n O_L into
the left order of one of the ideal classes.  Pic(O_n) acts on them freely;
reading off the class of each point gives the Galois orbit table.
"""

from heegner_lab.grossgalois import (base_point, class_data, galois_orbit, parse_twists,
                                     simultaneous_reduction)
from heegner_lab.quadratic import ImagQuadField, QuadOrder

ell, D = 11, -3
classes = class_data(ell)
fld = ImagQuadField(D)

# conductor 1: the point lives in the class with 6 units
pt = base_point(classes, QuadOrder(fld, 1))
print(pt, "w =", classes[pt.class_index].w)

# conductor 5: Pic(O_5) has order 2 and the orbit visits both classes
order = QuadOrder(fld, 5)
G, points = galois_orbit(base_point(classes, order), classes, order)
for form, p in points.items():
    print(tuple(form), "->", p)

# a twist by the nontrivial class shifts the column of the table
twists = parse_twists("id;5:3,3,7", D)
table = simultaneous_reduction(5, twists, classes, fld)
for nu, row in zip(table.rows, table.entries):
    print(tuple(nu), row)
print("coverage of the product-of-diagonals target:", table.coverage())
