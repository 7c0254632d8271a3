package org.util;

public final class Helpers {
    static final String DOC = """
        public class InTextBlock {}
        """;

    private Helpers() {}

    public static int twice(int x) {
        return 2 * x;
    }

    static class Inner {
        public void hidden() {}
    }

    @Override
    public String toString() {
        return "}";
    }
}
