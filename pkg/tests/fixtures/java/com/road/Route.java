package com.road;

@SuppressWarnings({"unused", "public class X {"})
public enum Route {
    NORTH,
    SOUTH("s") {
        void veer() {}
    };

    Route() {}

    private Route(String s) {}

    public int code() {
        return 1;
    }
}
