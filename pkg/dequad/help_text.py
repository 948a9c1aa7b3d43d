"""Textos de ayuda de la línea de comandos.

Cada subcomando tiene su descripción y el epílogo común recoge la gramática
de expresiones y los códigos de salida.
"""


def get_help(option: str) -> str:
    """Función que retorna el texto de ayuda del tema pedido.

    Args:
        option: "main", "epilog", "integrate", "bound", "converge", "table1"
            o "sample-decay".

    Returns:
        str: texto listo para argparse.
    """
    main = """
Cuadratura doble exponencial (tanh-sinh) en intervalos finitos, con la
cota a priori O(h²) del error global.
"""

    epilog = """
Expresiones (variable x):
  números decimales con exponente opcional, x, pi, e
  operadores + - * / ^   ('^' asociativo por la derecha; -x^2 = -(x^2))
  funciones sin cos tan exp log sqrt sinh cosh tanh abs
  sin multiplicación implícita: escribe 2*x, no 2x

Códigos de salida:
  0  correcto
  2  sin convergencia (se imprime el mejor valor)
  3  error de sintaxis en la expresión
  4  argumento fuera de dominio o uso incorrecto
"""

    integrate = """
Integra una expresión en (a, b) refinando h a la mitad hasta que dos
niveles consecutivos difieren menos de tol·(1 + |I|); se devuelve el más
grueso de los dos, con esa diferencia como error estimado. Si no se indica
c, se estima a partir del decaimiento del integrando transformado.
"""

    bound = """
Evalúa la cota global GError = (h²/3)(1+c)(e^(-4-c/2) + c/4), sus dos
términos, el umbral k0 y el límite h0 por debajo del cual vale el término
de la cola.
"""

    converge = """
Estudio de convergencia: una fila por nivel con h, evaluaciones, valor,
error absoluto (si se conoce el exacto) y cota. Con valor exacto se añade
el orden ajustado p; en CSV va como comentario "# p = ..." tras las filas.
--check-envelope ajusta c en la cola del integrando transformado y
comprueba que el error no supera la cota.
"""

    table1 = """
Reproduce la tabla del experimento de referencia: I1 con tol 1e-8,
evaluaciones, error absoluto y GError(h=1/129, c=2).
"""

    sample_decay = """
Muestrea e^(-c·e^|t|) en 201 puntos simétricos de [-t_max, t_max]. Con una
integral (--name o --expr) añade |F(t)| del integrando transformado.
"""

    if option == "main":
        return main
    elif option == "epilog":
        return epilog
    elif option == "integrate":
        return integrate
    elif option == "bound":
        return bound
    elif option == "converge":
        return converge
    elif option == "table1":
        return table1
    elif option == "sample-decay":
        return sample_decay
    else:
        return "Tema de ayuda desconocido"
