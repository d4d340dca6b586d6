package corpus;

public sealed class Sealed permits Sealed.Circle, Sealed.Square {
    public final class Circle extends Sealed {
        double radius;
    }

    public non-sealed class Square extends Sealed {
        double side;
    }
}
